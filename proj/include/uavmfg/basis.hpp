#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "uavmfg/state.hpp"

namespace uavmfg {

// Basis coordinates are ordered (x, v_x, y, v_y). This differs from the (r, v)
// order used by the dynamics; see basis_coords() and to_state_order().
enum BasisVar : int { kX = 0, kVx = 1, kY = 2, kVy = 3 };

/// coefficient * x^e0 * v_x^e1 * y^e2 * v_y^e3, total degree >= 1.
struct Monomial {
    std::array<int, 4> exponents{};
    double coefficient = 1.0;

    int degree() const { return exponents[0] + exponents[1] + exponents[2] + exponents[3]; }
    bool operator==(const Monomial&) const = default;
};

enum class BasisKind {
    Hjb, ///< (1 + x + v_x)^6 + (1 + y + v_y)^6 without the constant, 54 terms
    Fpk, ///< (1 + x + v_x + y + v_y)^4 without the constant, 69 terms
};

std::string_view to_string(BasisKind kind);

/// Optional affine change of input coordinates, z_j = scale_j * (u_j - offset_j),
/// in basis order. Identity by default.
struct StateScaling {
    Vec4 offset = Vec4::Zero();
    Vec4 scale = Vec4::Ones();

    bool is_identity() const { return offset.isZero(0.0) && scale == Vec4::Ones(); }
    bool operator==(const StateScaling&) const = default;
};

/// Ordered monomial terms. Order is graded: ascending total degree, then exponent
/// tuples in descending lexicographic order over (x, v_x, y, v_y). Weight vectors
/// are laid out in this order.
class PolynomialBasis {
public:
    PolynomialBasis() = default;
    PolynomialBasis(BasisKind kind, std::vector<Monomial> terms, StateScaling scaling = {});

    BasisKind kind() const { return kind_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    const StateScaling& scaling() const { return scaling_; }
    std::size_t size() const { return terms_.size(); }
    int max_degree() const { return max_degree_; }

    bool operator==(const PolynomialBasis& o) const {
        return kind_ == o.kind_ && terms_ == o.terms_ && scaling_ == o.scaling_;
    }

private:
    BasisKind kind_ = BasisKind::Hjb;
    std::vector<Monomial> terms_;
    StateScaling scaling_;
    int max_degree_ = 0;
};

/// Expands (1 + sum of `vars`)^power, drops the constant, merges duplicates and
/// sorts canonically.
std::vector<Monomial> expand_polynomial(std::span<const int> vars, int power);

void sort_canonical(std::vector<Monomial>& terms);

PolynomialBasis build_basis(BasisKind kind, const StateScaling& scaling = {});

/// (x, v_x, y, v_y) of a state.
Vec4 basis_coords(const UavState& s);

/// Permutes a basis-ordered vector to (r, v) order and back.
Vec4 to_state_order(const Vec4& g);
Mat4 to_state_order(const Mat4& h);

Eigen::VectorXd eval(const PolynomialBasis& basis, const Vec4& u);
inline Eigen::VectorXd eval(const PolynomialBasis& basis, const UavState& s) { return eval(basis, basis_coords(s)); }

/// d/du of w^T sigma(u), in basis order.
Vec4 gradient(const PolynomialBasis& basis, const Eigen::VectorXd& weights, const Vec4& u);
/// d^2/du du^T of w^T sigma(u), in basis order. Symmetric.
Mat4 hessian(const PolynomialBasis& basis, const Eigen::VectorXd& weights, const Vec4& u);

/// Per-term first derivatives: column m holds d sigma_m / du (basis order).
Eigen::Matrix<double, 4, Eigen::Dynamic> feature_jacobian(const PolynomialBasis& basis, const Vec4& u);

/// Entry m holds tr(Q * d^2 sigma_m / du du^T) for a symmetric Q in basis order.
Eigen::VectorXd feature_hessian_trace(const PolynomialBasis& basis, const Vec4& u, const Mat4& Q);

/// Values, first and second derivatives of every term at one point.
struct FeatureSet {
    Eigen::VectorXd value;                            ///< M
    Eigen::Matrix<double, 4, Eigen::Dynamic> jacobian; ///< 4 x M
    std::vector<Mat4> hessians;                       ///< M entries

    Vec4 gradient(const Eigen::VectorXd& w) const;
    Mat4 hessian(const Eigen::VectorXd& w) const;
};

FeatureSet features(const PolynomialBasis& basis, const Vec4& u);

} // namespace uavmfg
