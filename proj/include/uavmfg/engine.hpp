#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavmfg/basis.hpp"
#include "uavmfg/comms.hpp"
#include "uavmfg/cost.hpp"
#include "uavmfg/dynamics.hpp"
#include "uavmfg/fpk.hpp"
#include "uavmfg/hjb.hpp"
#include "uavmfg/runlog.hpp"

namespace uavmfg {

/// Scaling applied to model inputs by default: positions by 1/150 m, velocities by 1/100 m/s.
inline StateScaling default_model_scaling() {
    StateScaling sc;
    sc.scale = Vec4(1.0 / 150.0, 0.01, 1.0 / 150.0, 0.01);
    return sc;
}

/// Full experiment configuration. Defaults reproduce the 25-UAV reference setup.
struct Scenario {
    int n_uavs = 25;
    Vec2 source_center{150.0, 100.0};
    double grid_spacing = 1.4142135623730951;
    WindModel wind;
    CostParams cost;
    CommsConfig comms;
    TrainConfig train;
    Controller controller = Controller::MfgLearning;
    double dt = 1.0;
    int max_steps = 200;
    int k_inner = 5;
    double dest_tol = 1.0;
    std::uint64_t seed = 1;

    /// Quadrature box for the mean-field cost; derived from the initial swarm when unset.
    std::optional<IntegrationDomain> mf_domain;
    int mf_points_per_axis = 9;
    double mf_domain_inflation = 0.5;  ///< relative growth of the initial bounding box
    double mf_domain_min_half_width = 0.5;
    KdeConfig kde;

    StateScaling hjb_scaling = default_model_scaling();
    StateScaling fpk_scaling = default_model_scaling();

    void validate() const;
    bool operator==(const Scenario&) const = default;
};

enum class Execution { Serial, Parallel };

/// Per-UAV state carried between control instants.
struct Agent {
    UavState state;
    RandomStream rng;
    ValueModel value;
    DensityModel density;      ///< MFG only
    DensityModel density_prev; ///< converged density of the previous instant
    bool frozen = false;
};

struct Swarm {
    std::vector<Agent> agents;
    CountLedger exchanges;
    CountLedger gradients;
    std::shared_ptr<const QuadratureGrid> grid; ///< MFG only
    int step = 0; ///< control instants taken so far

    std::vector<UavState> states() const;
};

/// What one UAV did during one control instant.
struct StepRecord {
    Vec2 action = Vec2::Zero();
    double loss = 0.0;
    bool regularizer_active = false;
    std::uint64_t exchanges = 0;
    std::uint64_t gradient_evals = 0;
    bool diverged = false;
    std::string divergence;
};

/// sqrt(N) x sqrt(N) grid around the source; velocities v_o plus one OU increment
/// drawn from each UAV's stream.
std::vector<UavState> init_swarm(const Scenario& sc, std::vector<RandomStream>& streams);
std::vector<UavState> init_swarm(const Scenario& sc);

std::vector<RandomStream> make_streams(const Scenario& sc);

/// Bounding box of the states, inflated and floored per the scenario.
IntegrationDomain default_mf_domain(const Scenario& sc, std::span<const UavState> states);

/// Builds agents, models and (for MFG) the shared grid, initial fit and the
/// one-time N(N-1) exchange.
Swarm make_swarm(const Scenario& sc);

/// One HJB-learning control instant over a synchronous snapshot.
std::vector<StepRecord> hjb_learning_step(Swarm& swarm, const Scenario& sc, Execution exec = Execution::Parallel);

/// One MFG-learning control instant: K alternating value/density updates per UAV.
std::vector<StepRecord> mfg_learning_step(Swarm& swarm, const Scenario& sc, Execution exec = Execution::Parallel);

RunLog run(const Scenario& sc, Execution exec = Execution::Parallel);

/// Largest stable explicit time step on a 2-D grid, (1/dx + 1/dy)^-1.
double cfl_max_timestep(double dx, double dy);
/// One-dimensional bound, dx.
double cfl_max_timestep(double dx);

} // namespace uavmfg
