#include <doctest.h>

#include <random>
#include <set>

#include "uavmfg/engine.hpp"
#include "uavmfg/errors.hpp"
#include "uavmfg/metrics.hpp"

using namespace uavmfg;

namespace {

RunLog straight_line(int steps, Vec2 v, Vec2 a) {
    RunLog log;
    log.n_uavs = 1;
    log.dt = 1.0;
    log.max_steps = steps;
    log.steps_taken = steps;
    for (int k = 0; k <= steps; ++k) {
        UavRecord r;
        r.step = k;
        r.t = k;
        r.state = {Vec2(k * v.x(), k * v.y()), v};
        if (k < steps) r.action = a;
        log.records.push_back(r);
    }
    return log;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("collision threshold semantics") {
    std::vector<UavState> near{{Vec2(0.0, 0.0), Vec2::Zero()}, {Vec2(0.05, 0.0), Vec2::Zero()}};
    CHECK(count_collisions(near, kCollisionThreshold).size() == 1);
    std::vector<UavState> edge{{Vec2(0.0, 0.0), Vec2::Zero()}, {Vec2(0.0, 0.1), Vec2::Zero()}};
    CHECK(count_collisions(edge, kCollisionThreshold).empty());
    std::vector<UavState> far{{Vec2(0.0, 0.0), Vec2::Zero()}, {Vec2(0.2, 0.0), Vec2::Zero()}};
    CHECK(count_collisions(far, kCollisionThreshold).empty());
}

TEST_CASE("collision records") {
    std::vector<UavState> s{{Vec2(0.0, 0.0), Vec2::Zero()}, {Vec2(5.0, 0.0), Vec2::Zero()}, {Vec2(0.03, 0.04), Vec2::Zero()}};
    const auto c = count_collisions(s, kCollisionThreshold, 7);
    REQUIRE(c.size() == 1);
    CHECK(c[0].step == 7);
    CHECK(c[0].i == 0);
    CHECK(c[0].j == 2);
    CHECK(c[0].distance == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("no collisions on the reference grid") {
    Scenario sc;
    sc.wind.V_o.setZero();
    CHECK(count_collisions(init_swarm(sc), kCollisionThreshold).empty());
}

TEST_CASE("collisions are label symmetric") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<UavState> s;
    for (int i = 0; i < 40; ++i) s.push_back({Vec2(u(gen), u(gen)), Vec2::Zero()});
    const auto a = count_collisions(s, 0.1);
    std::vector<UavState> rev(s.rbegin(), s.rend());
    const auto b = count_collisions(rev, 0.1);
    CHECK(a.size() == b.size());
    std::set<std::pair<int, int>> pairs;
    for (const auto& c : a) CHECK(pairs.insert({c.i, c.j}).second);
    const int n = static_cast<int>(s.size());
    for (const auto& c : b) CHECK(pairs.count({n - 1 - c.j, n - 1 - c.i}) == 1);
}

TEST_CASE("motion energy") {
    CHECK(energy_summary(straight_line(10, Vec2::Zero(), Vec2::Zero())).motion == 0.0);
    CHECK(energy_summary(straight_line(10, Vec2(1.0, 0.0), Vec2::Zero())).motion == 10.0);
    const RunLog log = straight_line(4, Vec2(1.0, 2.0), Vec2(0.5, 0.0));
    double sum = 0.0;
    for (const auto& r : log.records)
        if (r.step < log.steps_taken) sum += (r.state.v.squaredNorm() + r.action.squaredNorm()) * log.dt;
    CHECK(energy_summary(log).motion == sum);
    CHECK(energy_summary(log).horizon == 4.0);
}

TEST_CASE("energy ratios") {
    EnergySummary a, b;
    a.communication = 600;
    a.computation = 50;
    a.motion = 4.0;
    a.horizon = 200.0;
    b = a;
    b.communication = 120000;
    b.computation = 0;
    const EnergyRatios r = energy_ratios(a, b);
    CHECK(*r.communication == doctest::Approx(1.0 / 200.0).epsilon(1e-15));
    CHECK_FALSE(r.computation.has_value());
    CHECK(*r.motion == 1.0);
    const EnergyRatios self = energy_ratios(a, a);
    CHECK(*self.communication == 1.0);
    CHECK(*self.computation == 1.0);
    CHECK(*self.motion == 1.0);
    b.horizon = 100.0;
    CHECK_THROWS_AS(energy_ratios(a, b), ComparisonError);
}

TEST_CASE("regularizer series") {
    RunLog log = straight_line(8, Vec2(1.0, 0.0), Vec2::Zero());
    CHECK(regularizer_series(log) == std::vector<std::uint64_t>(9, 0));
    log.records[5].regularizer_active = true;
    const auto s = regularizer_series(log);
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(s[k] == (k >= 5 ? 1u : 0u));
}

}
