// Command line driver: run a scenario, plot a trajectory, compare energy.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavmfg/config.hpp"
#include "uavmfg/errors.hpp"
#include "uavmfg/output.hpp"

namespace {

// UAVMFG_LOG=quiet|info|debug
int log_level() {
    const char* env = std::getenv("UAVMFG_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[uavmfg] " << msg << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean-field game learning control for UAV swarms"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "Simulate a scenario and write trajectory.csv and summary.ini");
    run->add_option("--config", config_path, "Scenario INI file")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");

    std::string traj_path, plot_dir;
    auto* plot = app.add_subcommand("plot", "Render trajectory.svg and regularizer.svg from a trajectory CSV");
    plot->add_option("--traj", traj_path, "Trajectory CSV")->required();
    plot->add_option("--out", plot_dir, "Output directory")->required();

    std::string ref_dir;
    std::vector<std::string> run_dirs;
    auto* compare = app.add_subcommand("compare", "Energy ratios of run directories against a reference run");
    compare->add_option("--ref", ref_dir, "Reference run directory")->required();
    compare->add_option("dirs", run_dirs, "Run directories")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            uavmfg::Scenario sc = uavmfg::parse_config(config_path);
            if (*seed_opt) sc.seed = seed;
            info("running " + uavmfg::to_string(sc.controller) + " with " + std::to_string(sc.n_uavs) + " UAVs, " +
                 std::to_string(sc.max_steps) + " steps");
            const auto a = uavmfg::cmd_run(sc, out_dir);
            info("wrote " + a.trajectory.string() + " and " + a.summary.string());
            if (log_level() >= 2) std::cerr << uavmfg::serialize_config(sc);
        } else if (*plot) {
            for (const auto& p : uavmfg::cmd_plot(traj_path, plot_dir)) info("wrote " + p.string());
        } else if (*compare) {
            std::vector<std::filesystem::path> dirs(run_dirs.begin(), run_dirs.end());
            std::cout << uavmfg::cmd_compare(ref_dir, dirs);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
