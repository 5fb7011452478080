#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "uavmfg/basis.hpp"
#include "uavmfg/errors.hpp"

using namespace uavmfg;

namespace {

// Number of monomials of degree 1..p in n variables: C(n + p, n) - 1.
long binom(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

int find_term(const PolynomialBasis& b, std::array<int, 4> e) {
    for (std::size_t m = 0; m < b.size(); ++m)
        if (b.terms()[m].exponents == e) return static_cast<int>(m);
    return -1;
}

Vec4 random_u(std::mt19937_64& gen, double amp) {
    std::uniform_real_distribution<double> u(-amp, amp);
    return {u(gen), u(gen), u(gen), u(gen)};
}

} // namespace

TEST_SUITE("basis") {

TEST_CASE("term counts") {
    CHECK(build_basis(BasisKind::Hjb).size() == 54);
    CHECK(build_basis(BasisKind::Fpk).size() == 69);
    CHECK(build_basis(BasisKind::Hjb).size() == static_cast<std::size_t>(2 * (binom(8, 2) - 1)));
    CHECK(build_basis(BasisKind::Fpk).size() == static_cast<std::size_t>(binom(8, 4) - 1));
}

TEST_CASE("degree-one expansion") {
    const std::array<int, 2> vars{kX, kVx};
    const auto t = expand_polynomial(vars, 1);
    REQUIRE(t.size() == 2);
    CHECK(t[0].exponents == std::array<int, 4>{1, 0, 0, 0});
    CHECK(t[1].exponents == std::array<int, 4>{0, 1, 0, 0});
    CHECK(t[0].coefficient == 1.0);
    CHECK(t[1].coefficient == 1.0);
}

TEST_CASE("multinomial coefficients match a direct expansion") {
    // Expand (1 + a + b)^6 by repeated multiplication of exponent maps.
    std::map<std::pair<int, int>, double> poly{{{0, 0}, 1.0}};
    for (int k = 0; k < 6; ++k) {
        std::map<std::pair<int, int>, double> next;
        for (const auto& [e, c] : poly) {
            next[e] += c;
            next[{e.first + 1, e.second}] += c;
            next[{e.first, e.second + 1}] += c;
        }
        poly = next;
    }
    const PolynomialBasis b = build_basis(BasisKind::Hjb);
    for (const auto& [e, c] : poly) {
        if (e.first + e.second == 0) continue;
        const int mx = find_term(b, {e.first, e.second, 0, 0});
        const int my = find_term(b, {0, 0, e.first, e.second});
        REQUIRE(mx >= 0);
        REQUIRE(my >= 0);
        CHECK(b.terms()[mx].coefficient == c);
        CHECK(b.terms()[my].coefficient == c);
    }
}

TEST_CASE("terms are distinct, nonconstant and canonically ordered") {
    for (auto kind : {BasisKind::Hjb, BasisKind::Fpk}) {
        const PolynomialBasis b = build_basis(kind);
        std::set<std::array<int, 4>> seen;
        for (std::size_t m = 0; m < b.size(); ++m) {
            const auto& t = b.terms()[m];
            CHECK(t.degree() >= 1);
            CHECK(t.coefficient >= 1.0);
            CHECK(seen.insert(t.exponents).second);
            if (m > 0) {
                const auto& p = b.terms()[m - 1];
                const bool ordered = p.degree() < t.degree() || (p.degree() == t.degree() && p.exponents > t.exponents);
                CHECK(ordered);
            }
        }
        CHECK(build_basis(kind) == b);
    }
}

TEST_CASE("features vanish at the origin") {
    CHECK(eval(build_basis(BasisKind::Hjb), Vec4::Zero()).isZero(0.0));
    CHECK(eval(build_basis(BasisKind::Fpk), Vec4::Zero()).isZero(0.0));
}

TEST_CASE("feature sums at ones") {
    CHECK(eval(build_basis(BasisKind::Hjb), Vec4::Ones()).sum() == 1456.0);
    CHECK(eval(build_basis(BasisKind::Fpk), Vec4::Ones()).sum() == 624.0);
}

TEST_CASE("coordinate permutation") {
    UavState s{Vec2(1.0, 2.0), Vec2(3.0, 4.0)};
    const Vec4 u = basis_coords(s);
    CHECK(u == Vec4(1.0, 3.0, 2.0, 4.0));
    CHECK(to_state_order(u) == s.stacked());
    Mat4 h;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h(i, j) = 10 * i + j;
    const Mat4 p = to_state_order(h);
    CHECK(p(0, 1) == h(kX, kY));
    CHECK(p(2, 3) == h(kVx, kVy));
    CHECK(p(1, 2) == h(kY, kVx));
}

TEST_CASE("zero weights give zero derivatives") {
    const PolynomialBasis b = build_basis(BasisKind::Hjb);
    const Eigen::VectorXd w = Eigen::VectorXd::Zero(b.size());
    const Vec4 u(1.5, -2.0, 0.3, 4.0);
    CHECK(gradient(b, w, u).isZero(0.0));
    CHECK(hessian(b, w, u).isZero(0.0));
}

TEST_CASE("weight length mismatch") {
    const PolynomialBasis b = build_basis(BasisKind::Fpk);
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(10);
    CHECK_THROWS_AS(gradient(b, w, Vec4::Ones()), DimensionError);
    CHECK_THROWS_AS(hessian(b, w, Vec4::Ones()), DimensionError);
}

TEST_CASE("degree limit") {
    std::vector<Monomial> t{{{8, 0, 0, 0}, 1.0}};
    CHECK_THROWS_AS(PolynomialBasis(BasisKind::Hjb, t), InvalidArgument);
}

TEST_CASE("linearity in weights") {
    std::mt19937_64 gen(3);
    for (auto kind : {BasisKind::Hjb, BasisKind::Fpk}) {
        const PolynomialBasis b = build_basis(kind);
        for (int k = 0; k < 20; ++k) {
            const Eigen::VectorXd w1 = oracle::random_weights(gen, b.size());
            const Eigen::VectorXd w2 = oracle::random_weights(gen, b.size());
            const Vec4 u = random_u(gen, 1.5);
            const double a = 0.7, c = -1.3;
            const Eigen::VectorXd w = a * w1 + c * w2;
            const Vec4 g = a * gradient(b, w1, u) + c * gradient(b, w2, u);
            const Mat4 h = a * hessian(b, w1, u) + c * hessian(b, w2, u);
            CHECK(oracle::rel_close(gradient(b, w, u), g, 1e-12));
            CHECK((hessian(b, w, u) - h).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()));
            CHECK(eval(b, u).dot(w) == doctest::Approx(a * eval(b, u).dot(w1) + c * eval(b, u).dot(w2)).epsilon(1e-12));
        }
    }
}

TEST_CASE("hessian is symmetric") {
    std::mt19937_64 gen(4);
    for (auto kind : {BasisKind::Hjb, BasisKind::Fpk}) {
        const PolynomialBasis b = build_basis(kind);
        for (int k = 0; k < 50; ++k) {
            const Mat4 h = hessian(b, oracle::random_weights(gen, b.size()), random_u(gen, 2.0));
            CHECK(h == h.transpose());
        }
    }
}

TEST_CASE("derivatives agree with the term-by-term oracle") {
    std::mt19937_64 gen(5);
    StateScaling sc;
    sc.offset = Vec4(0.5, -0.2, 1.0, 0.1);
    sc.scale = Vec4(0.3, 1.2, 0.7, 2.0);
    for (auto kind : {BasisKind::Hjb, BasisKind::Fpk}) {
        for (const auto& scaling : {StateScaling{}, sc}) {
            const PolynomialBasis b = build_basis(kind, scaling);
            for (int k = 0; k < 30; ++k) {
                const Eigen::VectorXd w = oracle::random_weights(gen, b.size());
                const UavState s = oracle::random_state(gen, -1.5, 1.5);
                const oracle::Poly p = oracle::poly(b, w, s);
                const Vec4 u = basis_coords(s);
                CHECK(eval(b, u).dot(w) == doctest::Approx(p.value).epsilon(1e-12));
                CHECK(oracle::rel_close(to_state_order(gradient(b, w, u)), p.grad, 1e-12));
                const Mat4 h = to_state_order(hessian(b, w, u));
                CHECK((h - p.hess).cwiseAbs().maxCoeff() <= 1e-12 * p.hess.cwiseAbs().maxCoeff());
            }
        }
    }
}

TEST_CASE("derivatives agree with central finite differences") {
    std::mt19937_64 gen(6);
    for (auto kind : {BasisKind::Hjb, BasisKind::Fpk}) {
        const PolynomialBasis b = build_basis(kind);
        for (int k = 0; k < 100; ++k) {
            const Eigen::VectorXd w = oracle::random_weights(gen, b.size());
            const Vec4 u = random_u(gen, 1.0);
            const double h = 1e-5;
            Vec4 g_fd;
            Mat4 h_fd;
            for (int j = 0; j < 4; ++j) {
                Vec4 up = u, um = u;
                up[j] += h;
                um[j] -= h;
                g_fd[j] = (eval(b, up).dot(w) - eval(b, um).dot(w)) / (2 * h);
                h_fd.col(j) = (gradient(b, w, up) - gradient(b, w, um)) / (2 * h);
            }
            CHECK(oracle::rel_close(gradient(b, w, u), g_fd, 1e-6));
            const Mat4 h_an = hessian(b, w, u);
            Eigen::Map<const Eigen::VectorXd> ha(h_an.data(), 16), hf(h_fd.data(), 16);
            CHECK(oracle::rel_close(ha, hf, 1e-5));
        }
    }
}

TEST_CASE("hessian trace helper") {
    std::mt19937_64 gen(8);
    const PolynomialBasis b = build_basis(BasisKind::Fpk);
    Mat4 Q = Mat4::Random();
    Q = Q + Q.transpose();
    const Vec4 u = random_u(gen, 1.0);
    const FeatureSet f = features(b, u);
    const Eigen::VectorXd tr = feature_hessian_trace(b, u, Q);
    for (std::size_t m = 0; m < b.size(); ++m)
        CHECK(tr[m] == doctest::Approx((Q * f.hessians[m]).trace()).epsilon(1e-12));
    CHECK(oracle::rel_close(f.value, eval(b, u), 0.0));
    CHECK(f.jacobian == feature_jacobian(b, u));
}

}
