#pragma once

#include <span>
#include <vector>

#include "uavmfg/state.hpp"

namespace uavmfg {

struct CostParams {
    double c1 = 100.0; ///< squared remaining distance
    double c2 = 1.5;   ///< kinetic energy
    double c3 = 1.5;   ///< control energy
    double c4 = 0.5;   ///< flocking / collision term weight
    double beta = 1.0;
    double eps = 0.001;
    double r_singularity_tol = 1e-6; ///< below this |r| the projected-velocity term is 0 [m]

    void validate() const;
    bool operator==(const CostParams&) const = default;
};

/// v.r/|r| + c1 |r|^2 + c2 |v|^2 + c3 |a|^2.
double local_cost(const UavState& s, const Vec2& a, const CostParams& p);

/// Cucker-Smale kernel |v_j - v_i|^2 / (eps + |r_j - r_i|^2)^beta.
double flocking_kernel(const UavState& self, const UavState& other, const CostParams& p);

/// Mean of the flocking kernel over the neighbor list; 0 for an empty list.
double global_cost_neighbors(const UavState& self, std::span<const UavState> neighbors, const CostParams& p);

/// Weighted point set standing in for a state density.
struct DiscreteMeasure {
    std::vector<UavState> points;
    std::vector<double> masses;

    static DiscreteMeasure empirical(std::span<const UavState> states);
};

struct MfCost {
    double value = 0.0;
    bool degenerate = false; ///< all mass clipped away
};

/// Integral of m(s) times the flocking kernel. Negative masses are clipped to 0
/// and the remainder renormalized to unit mass.
MfCost global_cost_mf(const UavState& self, const DiscreteMeasure& measure, const CostParams& p);

/// max{0, s^T ds/dt} with s and ds/dt in (r, v) order.
double regularizer(const UavState& s, const Vec4& ds_dt);

} // namespace uavmfg
