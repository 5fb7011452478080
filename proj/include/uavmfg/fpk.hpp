#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "uavmfg/basis.hpp"
#include "uavmfg/cost.hpp"
#include "uavmfg/dynamics.hpp"
#include "uavmfg/hjb.hpp"

namespace uavmfg {

/// Axis-aligned box in (x, y, v_x, v_y) with a midpoint tensor grid.
struct IntegrationDomain {
    Vec4 lower = Vec4::Zero();
    Vec4 upper = Vec4::Ones();
    int points_per_axis = 9;

    void validate() const;
    bool contains(const UavState& s) const;
    double volume() const { return (upper - lower).prod(); }
    bool operator==(const IntegrationDomain&) const = default;
};

/// Midpoint-rule nodes of a domain plus the basis features at each node.
class QuadratureGrid {
public:
    QuadratureGrid(const IntegrationDomain& domain, const PolynomialBasis& basis);

    const IntegrationDomain& domain() const { return domain_; }
    const std::vector<UavState>& nodes() const { return nodes_; }
    double cell_volume() const { return cell_volume_; }
    /// Row n holds sigma(node n).
    const Eigen::MatrixXd& features() const { return features_; }

    /// Raw density values w^T sigma at every node.
    Eigen::VectorXd density_at_nodes(const Eigen::VectorXd& weights) const { return features_ * weights; }

private:
    IntegrationDomain domain_;
    std::vector<UavState> nodes_;
    double cell_volume_ = 0.0;
    Eigen::MatrixXd features_;
};

/// m(s) = w^T sigma_F(s). Values are raw and may be negative.
struct DensityModel {
    PolynomialBasis basis;
    Eigen::VectorXd weights;
    IntegrationDomain domain;

    static DensityModel zeros(PolynomialBasis basis, IntegrationDomain domain);
    void validate() const;
};

double density(const DensityModel& dm, const UavState& s);

/// Node masses m(node) * cell volume (unclipped) as a discrete measure.
DiscreteMeasure to_measure(const DensityModel& dm, const QuadratureGrid& grid);

/// Flocking cost integrated against the model density over its quadrature grid.
MfCost global_cost_mf(const UavState& self, const DensityModel& dm, const QuadratureGrid& grid, const CostParams& p);

double hjb_residual_mf(const ValueModel& vm, const UavState& s, const DensityModel& dm, const QuadratureGrid& grid,
                       const WindModel& w, const CostParams& p);

struct FpkEvaluation {
    double residual = 0.0;
    Eigen::VectorXd d_residual; ///< d residual / d w_F
};

/// Residual of the FPK equation at s under the drift induced by the value model.
/// The time derivative is the backward difference (w_F - w_prev)^T sigma / dt.
FpkEvaluation evaluate_fpk(const DensityModel& dm, const ValueModel& vm, const UavState& s, const WindModel& w,
                           const CostParams& p, const Eigen::VectorXd& prev_weights, double dt);

double fpk_residual(const DensityModel& dm, const ValueModel& vm, const UavState& s, const WindModel& w,
                    const CostParams& p, const DensityModel& dm_prev, double dt);

/// Closed-loop drift D(s) = A s - (1/2c3) B B^T grad psi + c0 B v_o, (r, v) order.
Vec4 closed_loop_drift(const ValueModel& vm, const UavState& s, const WindModel& w, const CostParams& p);

struct FpkRecord {
    double loss = 0.0;
    double residual = 0.0;
    int gradient_evals = 0;
};

struct FpkUpdate {
    DensityModel model;
    FpkRecord record;
};

FpkUpdate fpk_update(const DensityModel& dm, const ValueModel& vm, const UavState& s, const WindModel& w,
                     const CostParams& p, const DensityModel& dm_prev, double dt, const TrainConfig& t);

struct KdeConfig {
    double bandwidth_floor = 0.70710678118654752; ///< per-axis lower bound on the Silverman bandwidth
    bool operator==(const KdeConfig&) const = default;
};

struct InitialFit {
    DensityModel model;
    double rms_error = 0.0; ///< RMS of (fit - KDE) over the quadrature nodes
    Vec4 bandwidth = Vec4::Zero();
};

/// Per-axis Silverman bandwidths 1.06 sigma_j N^(-1/5), floored.
Vec4 silverman_bandwidth(std::span<const UavState> states, const KdeConfig& cfg);

/// Gaussian KDE of the sample, evaluated at s.
double kde(std::span<const UavState> states, const Vec4& bandwidth, const UavState& s);

/// Least-squares fit of w^T sigma_F to the KDE of the sample at the grid nodes.
InitialFit fit_initial(std::span<const UavState> states, const PolynomialBasis& basis, const IntegrationDomain& domain,
                       const KdeConfig& cfg = {});

/// Solves min |Phi w - y| with column equilibration; shared by fit_initial and its tests.
Eigen::VectorXd least_squares(const Eigen::MatrixXd& Phi, const Eigen::VectorXd& y);

} // namespace uavmfg
