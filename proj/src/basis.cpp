#include "uavmfg/basis.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

#include "uavmfg/errors.hpp"

namespace uavmfg {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

void enumerate(std::span<const int> vars, int remaining, std::size_t pos, std::array<int, 4>& e,
               std::vector<std::array<int, 4>>& out) {
    if (pos == vars.size()) {
        out.push_back(e);
        return;
    }
    for (int p = 0; p <= remaining; ++p) {
        e[vars[pos]] = p;
        enumerate(vars, remaining - p, pos + 1, e, out);
    }
    e[vars[pos]] = 0;
}

// Powers z_j^p for p in [0, max_degree].
struct PowerTable {
    std::array<std::array<double, 8>, 4> pw{};

    PowerTable(const Vec4& z, int max_degree) {
        assert(max_degree < 8);
        for (int j = 0; j < 4; ++j) {
            pw[j][0] = 1.0;
            for (int p = 1; p <= max_degree; ++p) pw[j][p] = pw[j][p - 1] * z[j];
        }
    }

    // coefficient * prod_j z_j^(e_j - d_j), times the falling factorial from
    // differentiating d_j times; zero when any d_j > e_j.
    double term(const Monomial& m, const std::array<int, 4>& d) const {
        double v = m.coefficient;
        for (int j = 0; j < 4; ++j) {
            const int e = m.exponents[j];
            if (d[j] > e) return 0.0;
            for (int k = 0; k < d[j]; ++k) v *= (e - k);
            v *= pw[j][e - d[j]];
        }
        return v;
    }
};

Vec4 scaled(const StateScaling& sc, const Vec4& u) { return sc.scale.cwiseProduct(u - sc.offset); }

void check_weights(const PolynomialBasis& basis, const Eigen::VectorXd& w) {
    if (static_cast<std::size_t>(w.size()) != basis.size())
        throw DimensionError("weight vector has " + std::to_string(w.size()) + " entries, basis has " +
                             std::to_string(basis.size()) + " terms");
}

} // namespace

std::string_view to_string(BasisKind kind) {
    switch (kind) {
    case BasisKind::Hjb: return "HJB";
    case BasisKind::Fpk: return "FPK";
    }
    return "?";
}

PolynomialBasis::PolynomialBasis(BasisKind kind, std::vector<Monomial> terms, StateScaling scaling)
    : kind_(kind), terms_(std::move(terms)), scaling_(scaling) {
    for (const auto& t : terms_) max_degree_ = std::max(max_degree_, t.degree());
    if (max_degree_ >= 8) throw InvalidArgument("basis degree above 7 is not supported");
}

void sort_canonical(std::vector<Monomial>& terms) {
    std::sort(terms.begin(), terms.end(), [](const Monomial& a, const Monomial& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.exponents > b.exponents;
    });
}

std::vector<Monomial> expand_polynomial(std::span<const int> vars, int power) {
    std::vector<std::array<int, 4>> tuples;
    std::array<int, 4> e{};
    enumerate(vars, power, 0, e, tuples);

    std::vector<Monomial> out;
    for (const auto& ex : tuples) {
        const int deg = ex[0] + ex[1] + ex[2] + ex[3];
        if (deg == 0) continue;
        double c = factorial(power) / factorial(power - deg);
        for (int j = 0; j < 4; ++j) c /= factorial(ex[j]);
        out.push_back({ex, c});
    }
    sort_canonical(out);
    return out;
}

PolynomialBasis build_basis(BasisKind kind, const StateScaling& scaling) {
    std::vector<Monomial> terms;
    if (kind == BasisKind::Hjb) {
        const std::array<int, 2> xs{kX, kVx}, ys{kY, kVy};
        auto a = expand_polynomial(xs, 6);
        auto b = expand_polynomial(ys, 6);
        terms = std::move(a);
        terms.insert(terms.end(), b.begin(), b.end());
        std::map<std::array<int, 4>, int> seen;
        for (const auto& t : terms)
            if (++seen[t.exponents] > 1) throw std::logic_error("duplicate monomial in HJB basis");
    } else {
        const std::array<int, 4> all{kX, kVx, kY, kVy};
        terms = expand_polynomial(all, 4);
    }
    sort_canonical(terms);
    return PolynomialBasis(kind, std::move(terms), scaling);
}

Vec4 basis_coords(const UavState& s) { return {s.r.x(), s.v.x(), s.r.y(), s.v.y()}; }

Vec4 to_state_order(const Vec4& g) { return {g[kX], g[kY], g[kVx], g[kVy]}; }

Mat4 to_state_order(const Mat4& h) {
    static constexpr std::array<int, 4> p{kX, kY, kVx, kVy};
    Mat4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = h(p[i], p[j]);
    return out;
}

Eigen::VectorXd eval(const PolynomialBasis& basis, const Vec4& u) {
    const PowerTable t(scaled(basis.scaling(), u), basis.max_degree());
    Eigen::VectorXd out(basis.size());
    const std::array<int, 4> none{};
    for (std::size_t m = 0; m < basis.size(); ++m) out[m] = t.term(basis.terms()[m], none);
    return out;
}

Eigen::Matrix<double, 4, Eigen::Dynamic> feature_jacobian(const PolynomialBasis& basis, const Vec4& u) {
    const PowerTable t(scaled(basis.scaling(), u), basis.max_degree());
    const Vec4& sc = basis.scaling().scale;
    Eigen::Matrix<double, 4, Eigen::Dynamic> J(4, basis.size());
    for (std::size_t m = 0; m < basis.size(); ++m) {
        for (int j = 0; j < 4; ++j) {
            std::array<int, 4> d{};
            d[j] = 1;
            J(j, m) = sc[j] * t.term(basis.terms()[m], d);
        }
    }
    return J;
}

FeatureSet features(const PolynomialBasis& basis, const Vec4& u) {
    const PowerTable t(scaled(basis.scaling(), u), basis.max_degree());
    const Vec4& sc = basis.scaling().scale;
    const std::size_t M = basis.size();
    FeatureSet f;
    f.value.resize(M);
    f.jacobian.resize(4, M);
    f.hessians.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
        const Monomial& mono = basis.terms()[m];
        f.value[m] = t.term(mono, {});
        for (int j = 0; j < 4; ++j) {
            std::array<int, 4> d{};
            d[j] = 1;
            f.jacobian(j, m) = sc[j] * t.term(mono, d);
            for (int k = j; k < 4; ++k) {
                std::array<int, 4> dd{};
                ++dd[j];
                ++dd[k];
                const double h = sc[j] * sc[k] * t.term(mono, dd);
                f.hessians[m](j, k) = h;
                f.hessians[m](k, j) = h;
            }
        }
    }
    return f;
}

Eigen::VectorXd feature_hessian_trace(const PolynomialBasis& basis, const Vec4& u, const Mat4& Q) {
    const PowerTable t(scaled(basis.scaling(), u), basis.max_degree());
    const Vec4& sc = basis.scaling().scale;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.size());
    for (std::size_t m = 0; m < basis.size(); ++m) {
        double acc = 0.0;
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                if (Q(j, k) == 0.0) continue;
                std::array<int, 4> dd{};
                ++dd[j];
                ++dd[k];
                acc += Q(k, j) * sc[j] * sc[k] * t.term(basis.terms()[m], dd);
            }
        out[m] = acc;
    }
    return out;
}

Vec4 FeatureSet::gradient(const Eigen::VectorXd& w) const { return jacobian * w; }

Mat4 FeatureSet::hessian(const Eigen::VectorXd& w) const {
    Mat4 h = Mat4::Zero();
    for (Eigen::Index m = 0; m < w.size(); ++m) h += w[m] * hessians[m];
    return h;
}

Vec4 gradient(const PolynomialBasis& basis, const Eigen::VectorXd& weights, const Vec4& u) {
    check_weights(basis, weights);
    return feature_jacobian(basis, u) * weights;
}

Mat4 hessian(const PolynomialBasis& basis, const Eigen::VectorXd& weights, const Vec4& u) {
    check_weights(basis, weights);
    return features(basis, u).hessian(weights);
}

} // namespace uavmfg
