#include <doctest.h>

#include <cmath>

#include "uavmfg/dynamics.hpp"
#include "uavmfg/errors.hpp"

using namespace uavmfg;

TEST_SUITE("dynamics") {

TEST_CASE("nominal derivative at the wind fixed point") {
    WindModel w;
    UavState s{Vec2(7.0, -3.0), w.v_o};
    const Vec4 d = nominal_derivative(s, Vec2::Zero(), w);
    CHECK(d[0] == w.v_o.x());
    CHECK(d[1] == w.v_o.y());
    CHECK(d[2] == 0.0);
    CHECK(d[3] == 0.0);
}

TEST_CASE("nominal derivative at rest") {
    WindModel w;
    const Vec4 d = nominal_derivative(UavState{}, Vec2::Zero(), w);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
    CHECK(d[2] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(d[3] == doctest::Approx(-0.1).epsilon(1e-15));
}

TEST_CASE("nominal derivative matches the matrix form exactly") {
    WindModel w;
    w.c0 = 0.37;
    w.v_o = Vec2(0.3, -2.1);
    const SystemMatrices m = SystemMatrices::from(w);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int k = 0; k < 200; ++k) {
        UavState s{Vec2(u(gen), u(gen)), Vec2(u(gen), u(gen))};
        Vec2 a(u(gen), u(gen));
        const Vec4 ref = m.A * s.stacked() + m.B * (a + w.c0 * w.v_o);
        const Vec4 d = nominal_derivative(s, a, w);
        for (int i = 0; i < 4; ++i) CHECK(d[i] == ref[i]);
    }
}

TEST_CASE("system matrices block layout") {
    WindModel w;
    w.V_o << 0.1, 0.02, -0.03, 0.2;
    const SystemMatrices m = SystemMatrices::from(w);
    CHECK(m.A.block<2, 2>(0, 0).isZero(0.0));
    CHECK(m.A.block<2, 2>(0, 2) == Mat2::Identity());
    CHECK(m.A.block<2, 2>(2, 2) == -0.1 * Mat2::Identity());
    CHECK(m.B.topRows<2>().isZero(0.0));
    CHECK(m.B.bottomRows<2>() == Mat2::Identity());
    CHECK(m.G.bottomRows<2>() == w.V_o);
}

TEST_CASE("noiseless step keeps the fixed point") {
    WindModel w;
    w.V_o.setZero();
    RandomStream rng(1, 0);
    UavState s{Vec2(4.0, 5.0), w.v_o};
    const UavState n = step(s, Vec2::Zero(), w, 1.0, rng);
    CHECK(n.v == w.v_o);
    CHECK(n.r == Vec2(5.0, 4.0));
}

TEST_CASE("hand-evaluated Euler step") {
    WindModel w;
    w.V_o.setZero();
    w.c0 = 0.0;
    RandomStream rng(1, 0);
    const UavState n = step(UavState{Vec2::Zero(), Vec2(2.0, 0.0)}, Vec2(1.0, 0.0), w, 1.0, rng);
    CHECK(n.v == Vec2(3.0, 0.0));
    CHECK(n.r == Vec2(2.0, 0.0));
}

TEST_CASE("noiseless step equals Euler integration of the drift") {
    WindModel w;
    w.V_o.setZero();
    RandomStream rng(3, 3);
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 100; ++k) {
        UavState s{Vec2(u(gen), u(gen)), Vec2(u(gen), u(gen))};
        Vec2 a(u(gen), u(gen));
        const double dt = 0.25;
        const Vec4 d = nominal_derivative(s, a, w);
        const UavState n = step(s, a, w, dt, rng);
        CHECK(n.r == s.r + d.head<2>() * dt);
        CHECK(n.v == s.v + d.tail<2>() * dt);
    }
}

TEST_CASE("position update never reads the noise") {
    WindModel w;
    w.V_o = 3.0 * Mat2::Identity();
    RandomStream rng(5, 1);
    UavState s{Vec2(1.0, 2.0), Vec2(-0.5, 0.25)};
    for (int k = 0; k < 50; ++k) {
        const UavState n = step(s, Vec2(0.1, 0.2), w, 0.5, rng);
        CHECK(n.r == s.r + s.v * 0.5);
        s = n;
    }
}

TEST_CASE("step is deterministic given the stream state") {
    WindModel w;
    RandomStream a(42, 9), b(42, 9);
    UavState s{Vec2(1.0, 1.0), Vec2(0.0, 0.0)};
    for (int k = 0; k < 20; ++k) {
        const UavState na = step(s, Vec2(0.3, 0.1), w, 1.0, a);
        const UavState nb = step(s, Vec2(0.3, 0.1), w, 1.0, b);
        CHECK(na.r == nb.r);
        CHECK(na.v == nb.v);
        s = na;
    }
}

TEST_CASE("distinct streams differ") {
    RandomStream a(42, 0), b(42, 1), c(43, 0);
    const double x = a.normal(), y = b.normal(), z = c.normal();
    CHECK(x != y);
    CHECK(x != z);
}

TEST_CASE("non-positive dt is rejected") {
    WindModel w;
    RandomStream rng(1, 0);
    CHECK_THROWS_AS(step(UavState{}, Vec2::Zero(), w, 0.0, rng), InvalidArgument);
    CHECK_THROWS_AS(step(UavState{}, Vec2::Zero(), w, -1.0, rng), InvalidArgument);
    CHECK_THROWS_AS(step_with_noise(UavState{}, Vec2::Zero(), w, 0.0, Vec2::Zero()), InvalidArgument);
}

TEST_CASE("wind validation") {
    WindModel w;
    CHECK_NOTHROW(w.validate());
    w.c0 = 0.0;
    CHECK_THROWS_AS(w.validate(), InvalidArgument);
    w = WindModel{};
    w.V_o(0, 1) = std::nan("");
    CHECK_THROWS_AS(w.validate(), InvalidArgument);
}

TEST_CASE("standard normal moments of a stream") {
    RandomStream rng(2024, 5);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / n;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

}
