#include "uavmfg/engine.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "uavmfg/errors.hpp"
#include "uavmfg/metrics.hpp"

namespace uavmfg {

std::string to_string(Controller c) { return c == Controller::HjbLearning ? "HJB-learning" : "MFG-learning"; }

Controller controller_from_string(const std::string& s) {
    if (s == "HJB-learning") return Controller::HjbLearning;
    if (s == "MFG-learning") return Controller::MfgLearning;
    throw ConfigError("controller", "expected HJB-learning or MFG-learning, got '" + s + "'");
}

std::string to_string(Termination t) {
    return t == Termination::ReachedDestination ? "reached_destination" : "max_steps";
}

namespace {

int grid_side(int n) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return side * side == n ? side : -1;
}

// Runs fn(i) for every UAV. Each call writes only slot i of its outputs.
template <class Fn>
void for_each_uav(std::size_t n, Execution exec, Fn&& fn) {
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

void freeze(Agent& a, StepRecord& rec, const std::string& what) {
    a.frozen = true;
    rec.diverged = true;
    rec.divergence = what;
    rec.action = Vec2::Zero();
}

// Commits a new state unless it is non-finite, in which case the UAV freezes.
void advance(Agent& a, StepRecord& rec, const Scenario& sc) {
    if (!rec.action.allFinite()) {
        freeze(a, rec, "non-finite action");
        return;
    }
    const UavState next = step(a.state, rec.action, sc.wind, sc.dt, a.rng);
    if (!next.finite()) {
        freeze(a, rec, "non-finite state");
        return;
    }
    a.state = next;
}

// Folds per-UAV counts into the ledgers by UAV index, after the barrier.
void merge_ledgers(Swarm& swarm, const std::vector<StepRecord>& recs) {
    const auto slots = static_cast<std::size_t>(swarm.step) + 1;
    while (swarm.exchanges.per_step.size() < slots) swarm.exchanges.next_step();
    while (swarm.gradients.per_step.size() < slots) swarm.gradients.next_step();
    for (const auto& r : recs) {
        swarm.exchanges.record(r.exchanges);
        swarm.gradients.record(r.gradient_evals);
    }
    ++swarm.step;
}

} // namespace

void Scenario::validate() const {
    if (n_uavs <= 0 || grid_side(n_uavs) < 0) throw ConfigError("n_uavs", "must be a positive perfect square");
    if (!(grid_spacing > 0.0)) throw ConfigError("grid_spacing", "must be positive");
    if (!(dt > 0.0)) throw ConfigError("dt", "must be positive");
    if (!(dest_tol > 0.0)) throw ConfigError("dest_tol", "must be positive");
    if (max_steps < 0) throw ConfigError("max_steps", "must be non-negative");
    if (k_inner < 1) throw ConfigError("k_inner", "must be at least 1");
    if (mf_points_per_axis < 1) throw ConfigError("mf_points_per_axis", "must be positive");
    if (!(mf_domain_inflation >= 0.0)) throw ConfigError("mf_domain_inflation", "must be non-negative");
    if (!(mf_domain_min_half_width > 0.0)) throw ConfigError("mf_domain_min_half_width", "must be positive");
    if (!(kde.bandwidth_floor > 0.0)) throw ConfigError("kde_bandwidth_floor", "must be positive");
    if (!(hjb_scaling.scale.array() != 0.0).all()) throw ConfigError("hjb_scaling", "scale must be nonzero");
    if (!(fpk_scaling.scale.array() != 0.0).all()) throw ConfigError("fpk_scaling", "scale must be nonzero");
    auto wrap = [](const char* key, auto&& f) {
        try {
            f();
        } catch (const InvalidArgument& e) {
            throw ConfigError(key, e.what());
        }
    };
    wrap("wind", [&] { wind.validate(); });
    wrap("cost", [&] { cost.validate(); });
    wrap("comms", [&] { comms.validate(); });
    wrap("train", [&] { train.validate(); });
    if (mf_domain) wrap("mf_domain", [&] { mf_domain->validate(); });
}

std::vector<UavState> Swarm::states() const {
    std::vector<UavState> s;
    s.reserve(agents.size());
    for (const auto& a : agents) s.push_back(a.state);
    return s;
}

std::vector<RandomStream> make_streams(const Scenario& sc) {
    std::vector<RandomStream> streams;
    streams.reserve(static_cast<std::size_t>(sc.n_uavs));
    for (int i = 0; i < sc.n_uavs; ++i) streams.emplace_back(sc.seed, static_cast<std::uint64_t>(i));
    return streams;
}

std::vector<UavState> init_swarm(const Scenario& sc, std::vector<RandomStream>& streams) {
    const int side = grid_side(sc.n_uavs);
    if (sc.n_uavs <= 0 || side < 0) throw ConfigError("n_uavs", "must be a positive perfect square");
    if (streams.size() != static_cast<std::size_t>(sc.n_uavs)) throw DimensionError("init_swarm: one stream per UAV");
    const double half = 0.5 * (side - 1);
    std::vector<UavState> out;
    out.reserve(static_cast<std::size_t>(sc.n_uavs));
    for (int row = 0; row < side; ++row)
        for (int col = 0; col < side; ++col) {
            const auto i = static_cast<std::size_t>(row * side + col);
            UavState s;
            s.r = sc.source_center + sc.grid_spacing * Vec2(col - half, row - half);
            s.v = sc.wind.v_o + sc.wind.V_o * streams[i].normal2() * std::sqrt(sc.dt);
            out.push_back(s);
        }
    return out;
}

std::vector<UavState> init_swarm(const Scenario& sc) {
    auto streams = make_streams(sc);
    return init_swarm(sc, streams);
}

IntegrationDomain default_mf_domain(const Scenario& sc, std::span<const UavState> states) {
    Vec4 lo = Vec4::Constant(std::numeric_limits<double>::infinity());
    Vec4 hi = -lo;
    for (const auto& s : states) {
        lo = lo.cwiseMin(s.stacked());
        hi = hi.cwiseMax(s.stacked());
    }
    const Vec4 center = 0.5 * (lo + hi);
    const Vec4 half = (0.5 * (1.0 + sc.mf_domain_inflation) * (hi - lo)).cwiseMax(sc.mf_domain_min_half_width);
    return {center - half, center + half, sc.mf_points_per_axis};
}

Swarm make_swarm(const Scenario& sc) {
    sc.validate();
    Swarm swarm;
    auto streams = make_streams(sc);
    const auto states = init_swarm(sc, streams);
    const ValueModel value0 = ValueModel::zeros(build_basis(BasisKind::Hjb, sc.hjb_scaling));

    DensityModel density0;
    if (sc.controller == Controller::MfgLearning) {
        const IntegrationDomain domain = sc.mf_domain ? *sc.mf_domain : default_mf_domain(sc, states);
        const PolynomialBasis fb = build_basis(BasisKind::Fpk, sc.fpk_scaling);
        density0 = fit_initial(states, fb, domain, sc.kde).model;
        swarm.grid = std::make_shared<const QuadratureGrid>(domain, fb);
        // Every UAV collects every other UAV's initial state exactly once.
        swarm.exchanges.record(static_cast<std::uint64_t>(sc.n_uavs) * static_cast<std::uint64_t>(sc.n_uavs - 1));
    }

    swarm.agents.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        swarm.agents.push_back({states[i], streams[i], value0, density0, density0, false});
    return swarm;
}

std::vector<StepRecord> hjb_learning_step(Swarm& swarm, const Scenario& sc, Execution exec) {
    const std::vector<UavState> snapshot = swarm.states();
    const double d = comm_range(sc.comms);
    std::vector<StepRecord> recs(swarm.agents.size());

    for_each_uav(swarm.agents.size(), exec, [&](std::size_t i) {
        Agent& a = swarm.agents[i];
        StepRecord& rec = recs[i];
        if (a.frozen) return;
        const auto idx = neighbors(snapshot, i, d);
        std::vector<UavState> nbrs;
        nbrs.reserve(idx.size());
        for (auto j : idx) nbrs.push_back(snapshot[j]);
        rec.exchanges = idx.size();
        try {
            HjbUpdate u = ngd_update(a.value, a.state, nbrs, sc.wind, sc.cost, sc.train);
            a.value = std::move(u.model);
            rec.loss = u.record.loss;
            rec.regularizer_active = u.record.regularizer_active;
            rec.gradient_evals = static_cast<std::uint64_t>(u.record.gradient_evals);
            rec.action = optimal_action(a.value, a.state, sc.cost);
        } catch (const TrainingDivergence& e) {
            freeze(a, rec, e.what());
            return;
        }
        advance(a, rec, sc);
    });

    merge_ledgers(swarm, recs);
    return recs;
}

std::vector<StepRecord> mfg_learning_step(Swarm& swarm, const Scenario& sc, Execution exec) {
    if (!swarm.grid) throw InvalidArgument("mfg_learning_step: swarm has no mean-field grid");
    const QuadratureGrid& grid = *swarm.grid;
    std::vector<StepRecord> recs(swarm.agents.size());

    for_each_uav(swarm.agents.size(), exec, [&](std::size_t i) {
        Agent& a = swarm.agents[i];
        StepRecord& rec = recs[i];
        if (a.frozen) return;
        try {
            for (int k = 0; k < sc.k_inner; ++k) {
                const double phi_g = global_cost_mf(a.state, a.density, grid, sc.cost).value;
                HjbUpdate hu = ngd_update(a.value, a.state, phi_g, sc.wind, sc.cost, sc.train);
                a.value = std::move(hu.model);
                rec.loss = hu.record.loss;
                rec.regularizer_active = rec.regularizer_active || hu.record.regularizer_active;

                FpkUpdate fu = fpk_update(a.density, a.value, a.state, sc.wind, sc.cost, a.density_prev, sc.dt, sc.train);
                a.density = std::move(fu.model);
                rec.gradient_evals += static_cast<std::uint64_t>(hu.record.gradient_evals + fu.record.gradient_evals);
            }
            a.density_prev = a.density;
            rec.action = optimal_action(a.value, a.state, sc.cost);
        } catch (const TrainingDivergence& e) {
            freeze(a, rec, e.what());
            return;
        }
        advance(a, rec, sc);
    });

    merge_ledgers(swarm, recs);
    return recs;
}

namespace {

void append_rows(RunLog& log, int step, const Swarm& swarm) {
    for (std::size_t i = 0; i < swarm.agents.size(); ++i) {
        UavRecord r;
        r.step = step;
        r.t = step * log.dt;
        r.uav = static_cast<int>(i);
        r.state = swarm.agents[i].state;
        r.frozen = swarm.agents[i].frozen;
        log.records.push_back(r);
    }
}

bool all_arrived(const Swarm& swarm, double tol) {
    for (const auto& a : swarm.agents)
        if (a.state.r.norm() > tol || a.state.v.norm() > tol) return false;
    return true;
}

} // namespace

RunLog run(const Scenario& sc, Execution exec) {
    Swarm swarm = make_swarm(sc);
    RunLog log;
    log.controller = sc.controller;
    log.n_uavs = sc.n_uavs;
    log.dt = sc.dt;
    log.max_steps = sc.max_steps;
    log.collision_threshold = kCollisionThreshold;
    log.records.reserve(static_cast<std::size_t>(sc.n_uavs) * static_cast<std::size_t>(sc.max_steps + 1));

    auto note_collisions = [&](int step) {
        const auto states = swarm.states();
        auto c = count_collisions(states, log.collision_threshold, step);
        log.collisions.insert(log.collisions.end(), c.begin(), c.end());
    };

    append_rows(log, 0, swarm);
    note_collisions(0);

    int step = 0;
    log.termination = Termination::MaxSteps;
    while (step < sc.max_steps) {
        if (all_arrived(swarm, sc.dest_tol)) {
            log.termination = Termination::ReachedDestination;
            break;
        }
        const auto recs = sc.controller == Controller::HjbLearning ? hjb_learning_step(swarm, sc, exec)
                                                                   : mfg_learning_step(swarm, sc, exec);
        // Control data belongs to the rows of the instant it was applied at.
        const std::size_t base = static_cast<std::size_t>(step) * static_cast<std::size_t>(sc.n_uavs);
        for (std::size_t i = 0; i < recs.size(); ++i) {
            UavRecord& r = log.records[base + i];
            r.action = recs[i].action;
            r.loss = recs[i].loss;
            r.regularizer_active = recs[i].regularizer_active;
            if (recs[i].diverged) log.divergences.push_back({step, static_cast<int>(i), recs[i].divergence});
        }
        ++step;
        append_rows(log, step, swarm);
        note_collisions(step);
    }
    if (step == sc.max_steps && all_arrived(swarm, sc.dest_tol)) log.termination = Termination::ReachedDestination;

    log.steps_taken = step;
    log.exchanges = swarm.exchanges;
    log.gradients = swarm.gradients;
    return log;
}

double cfl_max_timestep(double dx, double dy) {
    if (!(dx > 0.0) || !(dy > 0.0)) throw InvalidArgument("cfl_max_timestep: spacings must be positive");
    return 1.0 / (1.0 / dx + 1.0 / dy);
}

double cfl_max_timestep(double dx) {
    if (!(dx > 0.0)) throw InvalidArgument("cfl_max_timestep: spacing must be positive");
    return dx;
}

} // namespace uavmfg
