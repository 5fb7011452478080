#pragma once

#include <span>

#include <Eigen/Core>

#include "uavmfg/basis.hpp"
#include "uavmfg/cost.hpp"
#include "uavmfg/dynamics.hpp"

namespace uavmfg {

/// psi(s) = w^T sigma_H(s) over the local state.
struct ValueModel {
    PolynomialBasis basis;
    Eigen::VectorXd weights;

    static ValueModel zeros(PolynomialBasis basis);
    void validate() const;
};

struct TrainConfig {
    double mu = 0.01;           ///< normalized step length
    double c_H = 0.5;           ///< regularizer weight
    double grad_fd_step = 1e-6; ///< weight-space finite-difference step (test oracle only)

    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

double value(const ValueModel& m, const UavState& s);

/// a* = -(1 / 2 c3) B^T grad psi(s), i.e. minus the velocity-gradient over 2 c3.
Vec2 optimal_action(const ValueModel& m, const UavState& s, const CostParams& p);

/// Everything the value-model update needs at one state.
struct HjbEvaluation {
    double residual = 0.0;
    Eigen::VectorXd d_residual;    ///< d residual / d w
    Vec2 action = Vec2::Zero();    ///< a*(w)
    Vec4 ds_dt = Vec4::Zero();     ///< nominal derivative under a*, (r, v) order
    double regularizer = 0.0;      ///< max{0, s^T ds/dt}
    Eigen::VectorXd d_regularizer; ///< zero unless the hinge is strictly active
};

/// Residual of the HJB equation for the model at s, with the interaction cost
/// phi_G already evaluated (unweighted; c4 is applied here).
HjbEvaluation evaluate_hjb(const ValueModel& m, const UavState& s, double global_cost, const WindModel& w,
                           const CostParams& p);

double hjb_residual_neighbors(const ValueModel& m, const UavState& s, std::span<const UavState> neighbors,
                              const WindModel& w, const CostParams& p);

double hjb_residual_mf(const ValueModel& m, const UavState& s, const DiscreteMeasure& density, const WindModel& w,
                       const CostParams& p);

struct NgdRecord {
    double loss = 0.0;     ///< 0.5 * residual^2 before the step
    double residual = 0.0;
    bool regularizer_active = false;
    int gradient_evals = 0;
};

struct HjbUpdate {
    ValueModel model;
    NgdRecord record;
};

/// w <- w - mu * g / |g| - c_H * dR/dw with g = residual * d residual / dw.
/// Throws TrainingDivergence on any non-finite gradient or weight.
HjbUpdate ngd_update(const ValueModel& m, const UavState& s, double global_cost, const WindModel& w,
                     const CostParams& p, const TrainConfig& t);

HjbUpdate ngd_update(const ValueModel& m, const UavState& s, std::span<const UavState> neighbors,
                     const WindModel& w, const CostParams& p, const TrainConfig& t);

HjbUpdate ngd_update(const ValueModel& m, const UavState& s, const DiscreteMeasure& density, const WindModel& w,
                     const CostParams& p, const TrainConfig& t);

/// G G^T (nonzero only in the velocity block) laid out in basis order.
Mat4 diffusion_in_basis_order(const WindModel& w);

/// Normalized step shared by both models: -mu * g / |g|, zero when g = 0.
Eigen::VectorXd normalized_step(const Eigen::VectorXd& g, double mu);

} // namespace uavmfg
