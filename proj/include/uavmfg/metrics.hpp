#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uavmfg/runlog.hpp"

namespace uavmfg {

inline constexpr double kCollisionThreshold = 0.1; // [m]

/// Unordered pairs with |r_i - r_j| < threshold (strict), each reported once.
std::vector<CollisionRecord> count_collisions(std::span<const UavState> states, double threshold, int step = 0);

/// Energy proxies over a run. Motion is sum over control instants and UAVs of
/// (|v|^2 + |a|^2) dt in arbitrary units.
struct EnergySummary {
    std::uint64_t communication = 0;
    std::uint64_t computation = 0;
    double motion = 0.0;
    int n_uavs = 0;
    double horizon = 0.0; ///< max_steps * dt of the producing run
};

EnergySummary energy_summary(const RunLog& log);

/// Category ratios against a reference run; nullopt where the reference is 0.
struct EnergyRatios {
    std::optional<double> communication;
    std::optional<double> computation;
    std::optional<double> motion;
};

/// Throws ComparisonError when the two runs were configured with different horizons.
EnergyRatios energy_ratios(const EnergySummary& run, const EnergySummary& reference);

/// Cumulative regularizer activations over UAVs, indexed by step.
std::vector<std::uint64_t> regularizer_series(const RunLog& log);

} // namespace uavmfg
