#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavmfg/comms.hpp"
#include "uavmfg/state.hpp"

namespace uavmfg {

enum class Controller { HjbLearning, MfgLearning };

std::string to_string(Controller c);
Controller controller_from_string(const std::string& s);

/// One UAV at one recorded step. The action, loss and regularizer flag refer to
/// the control applied at this step; they are zero on the final row.
struct UavRecord {
    int step = 0;
    double t = 0.0;
    int uav = 0;
    UavState state;
    Vec2 action = Vec2::Zero();
    double loss = 0.0;
    bool regularizer_active = false;
    bool frozen = false;
};

/// Unordered pair (i < j) closer than the collision threshold at one step.
struct CollisionRecord {
    int step = 0;
    int i = 0;
    int j = 0;
    double distance = 0.0;

    bool operator==(const CollisionRecord&) const = default;
};

struct DivergenceEvent {
    int step = 0;
    int uav = 0;
    std::string what;
};

enum class Termination { ReachedDestination, MaxSteps };
std::string to_string(Termination t);

struct RunLog {
    Controller controller = Controller::MfgLearning;
    int n_uavs = 0;
    double dt = 1.0;
    int max_steps = 0;
    int steps_taken = 0;
    double collision_threshold = 0.1;

    std::vector<UavRecord> records; ///< step-major, n_uavs rows per step, steps_taken + 1 steps
    CountLedger exchanges;
    CountLedger gradients;
    std::vector<CollisionRecord> collisions;
    std::vector<DivergenceEvent> divergences;
    Termination termination = Termination::MaxSteps;

    const UavRecord& at(int step, int uav) const {
        return records[static_cast<std::size_t>(step) * static_cast<std::size_t>(n_uavs) + static_cast<std::size_t>(uav)];
    }
};

} // namespace uavmfg
