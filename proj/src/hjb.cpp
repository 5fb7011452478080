#include "uavmfg/hjb.hpp"

#include <cmath>

#include "uavmfg/errors.hpp"

namespace uavmfg {

namespace {

Vec2 velocity_part(const Vec4& g_basis) { return {g_basis[kVx], g_basis[kVy]}; }
Vec2 position_part(const Vec4& g_basis) { return {g_basis[kX], g_basis[kY]}; }

} // namespace

/// G G^T restricted to the velocity block, laid out in basis order.
Mat4 diffusion_in_basis_order(const WindModel& w) {
    const Mat2 S = w.V_o * w.V_o.transpose();
    Mat4 Q = Mat4::Zero();
    Q(kVx, kVx) = S(0, 0);
    Q(kVx, kVy) = S(0, 1);
    Q(kVy, kVx) = S(1, 0);
    Q(kVy, kVy) = S(1, 1);
    return Q;
}

ValueModel ValueModel::zeros(PolynomialBasis basis) {
    ValueModel m{std::move(basis), {}};
    m.weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.basis.size()));
    return m;
}

void ValueModel::validate() const {
    if (static_cast<std::size_t>(weights.size()) != basis.size())
        throw DimensionError("value model: weight length does not match basis");
    if (!weights.allFinite()) throw InvalidArgument("value model: non-finite weights");
}

void TrainConfig::validate() const {
    if (!(mu > 0.0)) throw InvalidArgument("train: mu must be positive");
    if (!(c_H >= 0.0)) throw InvalidArgument("train: c_H must be non-negative");
    if (!(grad_fd_step > 0.0)) throw InvalidArgument("train: grad_fd_step must be positive");
}

double value(const ValueModel& m, const UavState& s) { return eval(m.basis, s).dot(m.weights); }

Vec2 optimal_action(const ValueModel& m, const UavState& s, const CostParams& p) {
    if (!(p.c3 > 0.0)) throw InvalidArgument("optimal_action: c3 must be positive");
    const Vec4 g = gradient(m.basis, m.weights, basis_coords(s));
    return -velocity_part(g) / (2.0 * p.c3);
}

HjbEvaluation evaluate_hjb(const ValueModel& m, const UavState& s, double global_cost, const WindModel& w,
                           const CostParams& p) {
    if (!(p.c3 > 0.0)) throw InvalidArgument("hjb: c3 must be positive");
    if (static_cast<std::size_t>(m.weights.size()) != m.basis.size())
        throw DimensionError("hjb: weight length does not match basis");

    const FeatureSet f = features(m.basis, basis_coords(s));
    const Vec4 gb = f.gradient(m.weights);
    const Vec2 g_r = position_part(gb);
    const Vec2 g_v = velocity_part(gb);

    Eigen::VectorXd trace_terms(m.weights.size());
    const Mat4 Q = diffusion_in_basis_order(w);
    for (Eigen::Index k = 0; k < trace_terms.size(); ++k) trace_terms[k] = Q.cwiseProduct(f.hessians[k]).sum();

    HjbEvaluation e;
    e.action = -g_v / (2.0 * p.c3);
    e.ds_dt = nominal_derivative(s, e.action, w);

    const Vec2 wind_drift = -w.c0 * s.v + w.c0 * w.v_o;
    const double time_term = e.ds_dt.head<2>().dot(g_r) + e.ds_dt.tail<2>().dot(g_v);
    const double drift_term = s.v.dot(g_r) + (wind_drift - g_v / (4.0 * p.c3)).dot(g_v);
    const double diffusion_term = 0.5 * trace_terms.dot(m.weights);
    e.residual = time_term + drift_term + diffusion_term + local_cost(s, e.action, p) + p.c4 * global_cost;

    const auto J_r_x = f.jacobian.row(kX), J_r_y = f.jacobian.row(kY);
    const auto J_v_x = f.jacobian.row(kVx), J_v_y = f.jacobian.row(kVy);
    const Vec2 lin_v = 2.0 * wind_drift - g_v / p.c3;
    e.d_residual = (2.0 * s.v.x()) * J_r_x.transpose() + (2.0 * s.v.y()) * J_r_y.transpose() +
                   lin_v.x() * J_v_x.transpose() + lin_v.y() * J_v_y.transpose() + 0.5 * trace_terms;

    const double hinge = s.stacked().dot(e.ds_dt);
    e.regularizer = std::max(0.0, hinge);
    if (hinge > 0.0) {
        e.d_regularizer = (-1.0 / (2.0 * p.c3)) * (s.v.x() * J_v_x.transpose() + s.v.y() * J_v_y.transpose());
    } else {
        e.d_regularizer = Eigen::VectorXd::Zero(m.weights.size());
    }
    return e;
}

double hjb_residual_neighbors(const ValueModel& m, const UavState& s, std::span<const UavState> neighbors,
                              const WindModel& w, const CostParams& p) {
    return evaluate_hjb(m, s, global_cost_neighbors(s, neighbors, p), w, p).residual;
}

double hjb_residual_mf(const ValueModel& m, const UavState& s, const DiscreteMeasure& density, const WindModel& w,
                       const CostParams& p) {
    return evaluate_hjb(m, s, global_cost_mf(s, density, p).value, w, p).residual;
}

Eigen::VectorXd normalized_step(const Eigen::VectorXd& g, double mu) {
    const double n = g.norm();
    if (n == 0.0) return Eigen::VectorXd::Zero(g.size());
    return (-mu / n) * g;
}

HjbUpdate ngd_update(const ValueModel& m, const UavState& s, double global_cost, const WindModel& w,
                     const CostParams& p, const TrainConfig& t) {
    const HjbEvaluation e = evaluate_hjb(m, s, global_cost, w, p);
    const Eigen::VectorXd grad = e.residual * e.d_residual;
    if (!grad.allFinite() || !e.d_regularizer.allFinite())
        throw TrainingDivergence(s, "value model: non-finite loss gradient");

    HjbUpdate u{m, {}};
    u.model.weights += normalized_step(grad, t.mu);
    if (e.regularizer > 0.0) u.model.weights -= t.c_H * e.d_regularizer;
    if (!u.model.weights.allFinite()) throw TrainingDivergence(s, "value model: non-finite weights");

    u.record.loss = 0.5 * e.residual * e.residual;
    u.record.residual = e.residual;
    u.record.regularizer_active = e.regularizer > 0.0;
    u.record.gradient_evals = 1;
    return u;
}

HjbUpdate ngd_update(const ValueModel& m, const UavState& s, std::span<const UavState> neighbors,
                     const WindModel& w, const CostParams& p, const TrainConfig& t) {
    return ngd_update(m, s, global_cost_neighbors(s, neighbors, p), w, p, t);
}

HjbUpdate ngd_update(const ValueModel& m, const UavState& s, const DiscreteMeasure& density, const WindModel& w,
                     const CostParams& p, const TrainConfig& t) {
    return ngd_update(m, s, global_cost_mf(s, density, p).value, w, p, t);
}

} // namespace uavmfg
