#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "uavmfg/basis.hpp"
#include "uavmfg/cost.hpp"
#include "uavmfg/dynamics.hpp"
#include "uavmfg/hjb.hpp"

namespace oracle {

using uavmfg::Mat4;
using uavmfg::UavState;
using uavmfg::Vec2;
using uavmfg::Vec4;

inline double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// |a - b| relative to the larger magnitude of b (vector infinity norms), with a floor
// so that an exactly zero reference is compared absolutely.
inline bool rel_close(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol, double floor = 1e-12) {
    const double scale = std::max(b.cwiseAbs().maxCoeff(), floor);
    return max_abs_diff(a, b) <= tol * scale;
}

inline bool rel_close(double a, double b, double tol, double floor = 1e-12) {
    return std::abs(a - b) <= tol * std::max(std::abs(b), floor);
}

inline UavState random_state(std::mt19937_64& gen, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return {Vec2(u(gen), u(gen)), Vec2(u(gen), u(gen))};
}

inline Eigen::VectorXd random_weights(std::mt19937_64& gen, std::size_t n, double amp = 1.0) {
    std::uniform_real_distribution<double> u(-amp, amp);
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    for (auto& x : w) x = u(gen);
    return w;
}

// Straight polynomial evaluation from the term list using std::pow, with the
// scaling applied by hand. Returns value, gradient and Hessian in (r, v) order.
struct Poly {
    double value = 0.0;
    Vec4 grad = Vec4::Zero();
    Mat4 hess = Mat4::Zero();
};

inline Poly poly(const uavmfg::PolynomialBasis& b, const Eigen::VectorXd& w, const UavState& s) {
    // basis order (x, vx, y, vy) from (r, v)
    const double raw[4] = {s.r.x(), s.v.x(), s.r.y(), s.v.y()};
    const int to_rv[4] = {0, 2, 1, 3};
    double z[4], k[4];
    for (int j = 0; j < 4; ++j) {
        k[j] = b.scaling().scale[j];
        z[j] = k[j] * (raw[j] - b.scaling().offset[j]);
    }
    auto pw = [](double x, int e) { return e <= 0 ? (e == 0 ? 1.0 : 0.0) : std::pow(x, e); };
    Poly out;
    for (std::size_t m = 0; m < b.size(); ++m) {
        const auto& t = b.terms()[m];
        const double c = w[static_cast<Eigen::Index>(m)] * t.coefficient;
        const auto& e = t.exponents;
        double val = c;
        for (int j = 0; j < 4; ++j) val *= pw(z[j], e[j]);
        out.value += val;
        for (int a = 0; a < 4; ++a) {
            double g = c * e[a] * pw(z[a], e[a] - 1) * k[a];
            for (int j = 0; j < 4; ++j)
                if (j != a) g *= pw(z[j], e[j]);
            out.grad[to_rv[a]] += g;
            for (int bb = 0; bb < 4; ++bb) {
                double h = c * k[a] * k[bb];
                if (a == bb) {
                    h *= e[a] * (e[a] - 1) * pw(z[a], e[a] - 2);
                    for (int j = 0; j < 4; ++j)
                        if (j != a) h *= pw(z[j], e[j]);
                } else {
                    h *= e[a] * pw(z[a], e[a] - 1) * e[bb] * pw(z[bb], e[bb] - 1);
                    for (int j = 0; j < 4; ++j)
                        if (j != a && j != bb) h *= pw(z[j], e[j]);
                }
                out.hess(to_rv[a], to_rv[bb]) += h;
            }
        }
    }
    return out;
}

inline double local_cost(const UavState& s, const Vec2& a, const uavmfg::CostParams& p) {
    const double rn = std::sqrt(s.r.x() * s.r.x() + s.r.y() * s.r.y());
    const double proj = rn < p.r_singularity_tol ? 0.0 : (s.v.x() * s.r.x() + s.v.y() * s.r.y()) / rn;
    return proj + p.c1 * rn * rn + p.c2 * (s.v.x() * s.v.x() + s.v.y() * s.v.y()) +
           p.c3 * (a.x() * a.x() + a.y() * a.y());
}

inline double flocking(const UavState& self, std::span<const UavState> others, const uavmfg::CostParams& p) {
    if (others.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& o : others) {
        const double dvx = o.v.x() - self.v.x(), dvy = o.v.y() - self.v.y();
        const double drx = o.r.x() - self.r.x(), dry = o.r.y() - self.r.y();
        sum += (dvx * dvx + dvy * dvy) / std::pow(p.eps + drx * drx + dry * dry, p.beta);
    }
    return sum / static_cast<double>(others.size());
}

// HJB residual written out from the matrix form:
//   (A s + B (a* + c0 v_o))^T g + (A s - BB^T g / 4c3 + c0 B v_o)^T g + tr(GG^T H)/2 + phi_L + c4 phi_G
inline double hjb_residual(const uavmfg::ValueModel& m, const UavState& s, std::span<const UavState> nb,
                           const uavmfg::WindModel& w, const uavmfg::CostParams& p) {
    const Poly ps = poly(m.basis, m.weights, s);
    Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
    A(0, 2) = 1.0;
    A(1, 3) = 1.0;
    A(2, 2) = -w.c0;
    A(3, 3) = -w.c0;
    Eigen::Matrix<double, 4, 2> B = Eigen::Matrix<double, 4, 2>::Zero();
    B(2, 0) = 1.0;
    B(3, 1) = 1.0;
    Eigen::Matrix<double, 4, 2> G = Eigen::Matrix<double, 4, 2>::Zero();
    G.bottomRows<2>() = w.V_o;
    const Vec4 x = s.stacked();
    const Vec2 a = -(B.transpose() * ps.grad) / (2.0 * p.c3);
    const Vec4 dsdt = A * x + B * (a + w.c0 * w.v_o);
    const Vec4 ham = A * x - B * B.transpose() * ps.grad / (4.0 * p.c3) + w.c0 * B * w.v_o;
    const double tr = (G * G.transpose() * ps.hess).trace();
    return dsdt.dot(ps.grad) + ham.dot(ps.grad) + 0.5 * tr + oracle::local_cost(s, a, p) + p.c4 * oracle::flocking(s, nb, p);
}

// Central difference of f over each weight.
inline Eigen::VectorXd fd_weights(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& w,
                                  double h) {
    Eigen::VectorXd g(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        Eigen::VectorXd wp = w, wm = w;
        wp[i] += h;
        wm[i] -= h;
        g[i] = (f(wp) - f(wm)) / (2.0 * h);
    }
    return g;
}

} // namespace oracle
