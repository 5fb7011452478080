#include "uavmfg/fpk.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "uavmfg/errors.hpp"

namespace uavmfg {

void IntegrationDomain::validate() const {
    if (!lower.allFinite() || !upper.allFinite()) throw InvalidArgument("domain: bounds must be finite");
    if (!(lower.array() < upper.array()).all()) throw InvalidArgument("domain: lower must be below upper on every axis");
    if (points_per_axis < 1) throw InvalidArgument("domain: points_per_axis must be positive");
}

bool IntegrationDomain::contains(const UavState& s) const {
    const Vec4 x = s.stacked();
    return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

QuadratureGrid::QuadratureGrid(const IntegrationDomain& domain, const PolynomialBasis& basis) : domain_(domain) {
    domain.validate();
    const int n = domain.points_per_axis;
    const Vec4 h = (domain.upper - domain.lower) / n;
    cell_volume_ = h.prod();
    nodes_.reserve(static_cast<std::size_t>(n) * n * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const Vec4 idx(i + 0.5, j + 0.5, k + 0.5, l + 0.5);
                    nodes_.push_back(UavState::from_stacked(domain.lower + h.cwiseProduct(idx)));
                }
    features_.resize(static_cast<Eigen::Index>(nodes_.size()), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t r = 0; r < nodes_.size(); ++r) features_.row(static_cast<Eigen::Index>(r)) = eval(basis, nodes_[r]);
}

DensityModel DensityModel::zeros(PolynomialBasis basis, IntegrationDomain domain) {
    DensityModel d{std::move(basis), {}, domain};
    d.weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.basis.size()));
    return d;
}

void DensityModel::validate() const {
    if (static_cast<std::size_t>(weights.size()) != basis.size())
        throw DimensionError("density model: weight length does not match basis");
    domain.validate();
}

double density(const DensityModel& dm, const UavState& s) { return eval(dm.basis, s).dot(dm.weights); }

DiscreteMeasure to_measure(const DensityModel& dm, const QuadratureGrid& grid) {
    DiscreteMeasure m;
    m.points = grid.nodes();
    const Eigen::VectorXd vals = grid.density_at_nodes(dm.weights) * grid.cell_volume();
    m.masses.assign(vals.data(), vals.data() + vals.size());
    return m;
}

MfCost global_cost_mf(const UavState& self, const DensityModel& dm, const QuadratureGrid& grid, const CostParams& p) {
    if (static_cast<std::size_t>(dm.weights.size()) != static_cast<std::size_t>(grid.features().cols()))
        throw DimensionError("mf cost: density weights do not match the quadrature grid basis");
    // Equivalent to global_cost_mf(self, to_measure(dm, grid), p).
    const Eigen::VectorXd vals = grid.density_at_nodes(dm.weights);
    const auto& nodes = grid.nodes();
    double total = 0.0, acc = 0.0;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        const double m = vals[static_cast<Eigen::Index>(n)];
        if (!(m > 0.0)) continue;
        total += m;
        acc += m * flocking_kernel(self, nodes[n], p);
    }
    if (total == 0.0) return {0.0, true};
    return {acc / total, false};
}

double hjb_residual_mf(const ValueModel& vm, const UavState& s, const DensityModel& dm, const QuadratureGrid& grid,
                       const WindModel& w, const CostParams& p) {
    return evaluate_hjb(vm, s, global_cost_mf(s, dm, grid, p).value, w, p).residual;
}

Vec4 closed_loop_drift(const ValueModel& vm, const UavState& s, const WindModel& w, const CostParams& p) {
    return nominal_derivative(s, optimal_action(vm, s, p), w);
}

FpkEvaluation evaluate_fpk(const DensityModel& dm, const ValueModel& vm, const UavState& s, const WindModel& w,
                           const CostParams& p, const Eigen::VectorXd& prev_weights, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("fpk: dt must be positive");
    if (!(p.c3 > 0.0)) throw InvalidArgument("fpk: c3 must be positive");
    if (static_cast<std::size_t>(dm.weights.size()) != dm.basis.size() || prev_weights.size() != dm.weights.size())
        throw DimensionError("fpk: density weights do not match basis");

    const Vec4 u = basis_coords(s);
    const FeatureSet fv = features(vm.basis, u);
    const Vec4 g_psi = fv.gradient(vm.weights);
    const Mat4 h_psi = fv.hessian(vm.weights);

    // D in basis order, and its divergence -2 c0 - (1/2c3) tr(B B^T hess psi).
    const Vec4 D_state = nominal_derivative(s, -Vec2(g_psi[kVx], g_psi[kVy]) / (2.0 * p.c3), w);
    const Vec4 D(D_state[0], D_state[2], D_state[1], D_state[3]);
    const double div_D = -2.0 * w.c0 - (h_psi(kVx, kVx) + h_psi(kVy, kVy)) / (2.0 * p.c3);

    const FeatureSet fm = features(dm.basis, u);
    const Mat4 Q = diffusion_in_basis_order(w);
    Eigen::VectorXd trace_terms(dm.weights.size());
    for (Eigen::Index k = 0; k < trace_terms.size(); ++k) trace_terms[k] = Q.cwiseProduct(fm.hessians[k]).sum();

    FpkEvaluation e;
    e.d_residual = fm.value * (1.0 / dt + div_D) + fm.jacobian.transpose() * D - 0.5 * trace_terms;
    e.residual = e.d_residual.dot(dm.weights) - fm.value.dot(prev_weights) / dt;
    return e;
}

double fpk_residual(const DensityModel& dm, const ValueModel& vm, const UavState& s, const WindModel& w,
                    const CostParams& p, const DensityModel& dm_prev, double dt) {
    if (!(dm.basis == dm_prev.basis) || !(dm.domain == dm_prev.domain))
        throw DimensionError("fpk: current and previous density models differ in basis or domain");
    return evaluate_fpk(dm, vm, s, w, p, dm_prev.weights, dt).residual;
}

FpkUpdate fpk_update(const DensityModel& dm, const ValueModel& vm, const UavState& s, const WindModel& w,
                     const CostParams& p, const DensityModel& dm_prev, double dt, const TrainConfig& t) {
    if (!(dm.basis == dm_prev.basis) || !(dm.domain == dm_prev.domain))
        throw DimensionError("fpk: current and previous density models differ in basis or domain");
    const FpkEvaluation e = evaluate_fpk(dm, vm, s, w, p, dm_prev.weights, dt);
    const Eigen::VectorXd grad = e.residual * e.d_residual;
    if (!grad.allFinite()) throw TrainingDivergence(s, "density model: non-finite loss gradient");

    FpkUpdate u{dm, {}};
    u.model.weights += normalized_step(grad, t.mu);
    u.record.loss = 0.5 * e.residual * e.residual;
    u.record.residual = e.residual;
    u.record.gradient_evals = 1;
    return u;
}

Vec4 silverman_bandwidth(std::span<const UavState> states, const KdeConfig& cfg) {
    const double n = static_cast<double>(states.size());
    Vec4 mean = Vec4::Zero();
    for (const auto& s : states) mean += s.stacked();
    mean /= n;
    Vec4 var = Vec4::Zero();
    for (const auto& s : states) var += (s.stacked() - mean).cwiseAbs2();
    var = states.size() > 1 ? Vec4(var / (n - 1.0)) : Vec4::Zero();
    const Vec4 h = 1.06 * var.cwiseSqrt() * std::pow(n, -0.2);
    return h.cwiseMax(cfg.bandwidth_floor);
}

double kde(std::span<const UavState> states, const Vec4& bandwidth, const UavState& s) {
    const double norm = 1.0 / (std::pow(2.0 * std::numbers::pi, 2.0) * bandwidth.prod());
    const Vec4 x = s.stacked();
    double acc = 0.0;
    for (const auto& si : states) {
        const Vec4 z = (x - si.stacked()).cwiseQuotient(bandwidth);
        acc += std::exp(-0.5 * z.squaredNorm());
    }
    return norm * acc / static_cast<double>(states.size());
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& Phi, const Eigen::VectorXd& y) {
    Eigen::VectorXd colnorm = Phi.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < colnorm.size(); ++j)
        if (colnorm[j] == 0.0) colnorm[j] = 1.0;
    const Eigen::MatrixXd scaled = Phi * colnorm.cwiseInverse().asDiagonal();
    const Eigen::VectorXd z = scaled.colPivHouseholderQr().solve(y);
    return z.cwiseQuotient(colnorm);
}

InitialFit fit_initial(std::span<const UavState> states, const PolynomialBasis& basis, const IntegrationDomain& domain,
                       const KdeConfig& cfg) {
    if (states.empty()) throw InvalidArgument("fit_initial: need at least one state");
    domain.validate();
    for (const auto& s : states)
        if (!domain.contains(s)) throw DomainError("fit_initial: state outside the integration domain");

    const QuadratureGrid grid(domain, basis);
    InitialFit fit;
    fit.bandwidth = silverman_bandwidth(states, cfg);
    Eigen::VectorXd target(static_cast<Eigen::Index>(grid.nodes().size()));
    for (std::size_t n = 0; n < grid.nodes().size(); ++n)
        target[static_cast<Eigen::Index>(n)] = kde(states, fit.bandwidth, grid.nodes()[n]);

    fit.model = DensityModel{basis, least_squares(grid.features(), target), domain};
    const Eigen::VectorXd err = grid.features() * fit.model.weights - target;
    fit.rms_error = std::sqrt(err.squaredNorm() / static_cast<double>(err.size()));
    return fit;
}

} // namespace uavmfg
