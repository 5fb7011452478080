#include "uavmfg/cost.hpp"

#include <cmath>

#include "uavmfg/errors.hpp"

namespace uavmfg {

void CostParams::validate() const {
    auto pos = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string("cost: ") + name + " must be positive");
    };
    pos(c1, "c1");
    pos(c2, "c2");
    pos(c3, "c3");
    pos(c4, "c4");
    pos(beta, "beta");
    pos(eps, "eps");
    pos(r_singularity_tol, "r_singularity_tol");
}

double local_cost(const UavState& s, const Vec2& a, const CostParams& p) {
    const double rn = s.r.norm();
    const double projected = rn < p.r_singularity_tol ? 0.0 : s.v.dot(s.r) / rn;
    return projected + p.c1 * s.r.squaredNorm() + p.c2 * s.v.squaredNorm() + p.c3 * a.squaredNorm();
}

double flocking_kernel(const UavState& self, const UavState& other, const CostParams& p) {
    const double num = (other.v - self.v).squaredNorm();
    if (num == 0.0) return 0.0;
    const double den = p.eps + (other.r - self.r).squaredNorm();
    return num / (p.beta == 1.0 ? den : std::pow(den, p.beta));
}

double global_cost_neighbors(const UavState& self, std::span<const UavState> neighbors, const CostParams& p) {
    if (neighbors.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& n : neighbors) sum += flocking_kernel(self, n, p);
    return sum / static_cast<double>(neighbors.size());
}

DiscreteMeasure DiscreteMeasure::empirical(std::span<const UavState> states) {
    DiscreteMeasure m;
    m.points.assign(states.begin(), states.end());
    m.masses.assign(states.size(), states.empty() ? 0.0 : 1.0 / static_cast<double>(states.size()));
    return m;
}

MfCost global_cost_mf(const UavState& self, const DiscreteMeasure& measure, const CostParams& p) {
    if (measure.points.size() != measure.masses.size())
        throw DimensionError("measure: points and masses differ in length");
    double total = 0.0, acc = 0.0;
    for (std::size_t n = 0; n < measure.points.size(); ++n) {
        const double m = measure.masses[n];
        if (!(m > 0.0)) continue;
        total += m;
        acc += m * flocking_kernel(self, measure.points[n], p);
    }
    if (total == 0.0) return {0.0, true};
    return {acc / total, false};
}

double regularizer(const UavState& s, const Vec4& ds_dt) { return std::max(0.0, s.stacked().dot(ds_dt)); }

} // namespace uavmfg
