#include "uavmfg/metrics.hpp"

#include <cmath>

#include "uavmfg/errors.hpp"

namespace uavmfg {

std::vector<CollisionRecord> count_collisions(std::span<const UavState> states, double threshold, int step) {
    if (!(threshold > 0.0)) throw InvalidArgument("count_collisions: threshold must be positive");
    std::vector<CollisionRecord> out;
    const double t2 = threshold * threshold;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            const double d2 = (states[i].r - states[j].r).squaredNorm();
            if (d2 < t2) out.push_back({step, static_cast<int>(i), static_cast<int>(j), std::sqrt(d2)});
        }
    return out;
}

EnergySummary energy_summary(const RunLog& log) {
    EnergySummary e;
    e.communication = log.exchanges.cumulative;
    e.computation = log.gradients.cumulative;
    e.n_uavs = log.n_uavs;
    e.horizon = log.max_steps * log.dt;
    for (const auto& r : log.records) {
        if (r.step >= log.steps_taken) continue; // final row carries no control
        e.motion += (r.state.v.squaredNorm() + r.action.squaredNorm()) * log.dt;
    }
    return e;
}

EnergyRatios energy_ratios(const EnergySummary& run, const EnergySummary& reference) {
    if (run.horizon != reference.horizon)
        throw ComparisonError("energy ratios: horizons differ (" + std::to_string(run.horizon) + " vs " +
                              std::to_string(reference.horizon) + ")");
    EnergyRatios r;
    if (reference.communication != 0)
        r.communication = static_cast<double>(run.communication) / static_cast<double>(reference.communication);
    if (reference.computation != 0)
        r.computation = static_cast<double>(run.computation) / static_cast<double>(reference.computation);
    if (reference.motion != 0.0) r.motion = run.motion / reference.motion;
    return r;
}

std::vector<std::uint64_t> regularizer_series(const RunLog& log) {
    std::vector<std::uint64_t> series(static_cast<std::size_t>(log.steps_taken) + 1, 0);
    for (const auto& r : log.records)
        if (r.regularizer_active) ++series[static_cast<std::size_t>(r.step)];
    for (std::size_t k = 1; k < series.size(); ++k) series[k] += series[k - 1];
    return series;
}

} // namespace uavmfg
