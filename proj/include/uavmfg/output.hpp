#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "uavmfg/engine.hpp"
#include "uavmfg/metrics.hpp"

namespace uavmfg {

inline constexpr const char* kTrajectoryHeader = "step,t,uav,x,y,vx,vy,ax,ay,loss,reg_active";
inline constexpr const char* kTrajectoryFile = "trajectory.csv";
inline constexpr const char* kSummaryFile = "summary.ini";
inline constexpr const char* kTrajectoryPlotFile = "trajectory.svg";
inline constexpr const char* kRegularizerPlotFile = "regularizer.svg";

struct RunArtifacts {
    std::filesystem::path trajectory;
    std::filesystem::path summary;
    std::vector<std::filesystem::path> plots;
};

/// One CSV row per (step, UAV), step-major, header kTrajectoryHeader.
void write_trajectory_csv(const RunLog& log, std::ostream& out);
void write_trajectory_csv(const RunLog& log, const std::filesystem::path& path);

/// Parses a trajectory CSV back into records (step, t, uav, state, action,
/// loss, flag). Throws ParseError with the 1-based line number.
std::vector<UavRecord> read_trajectory_csv(const std::filesystem::path& path);
std::vector<UavRecord> read_trajectory_csv(std::istream& in);

/// Summary file contents as read back by `compare`.
struct RunSummary {
    std::string controller;
    int n_uavs = 0;
    int steps_taken = 0;
    std::string termination;
    EnergySummary energy;
    std::size_t collisions = 0;
    std::size_t divergences = 0;
};

RunSummary summarize(const RunLog& log);
void write_summary(const RunSummary& s, const std::filesystem::path& path);
RunSummary read_summary(const std::filesystem::path& path);

/// Runs the scenario and writes trajectory.csv and summary.ini into out_dir.
RunArtifacts cmd_run(const Scenario& sc, const std::filesystem::path& out_dir, Execution exec = Execution::Parallel);

/// Renders trajectory.svg (paths, source and destination markers) and
/// regularizer.svg (cumulative activations) from a trajectory CSV.
std::vector<std::filesystem::path> cmd_plot(const std::filesystem::path& trajectory_csv,
                                            const std::filesystem::path& out_dir);

/// Energy ratio table of each run directory against the reference directory.
std::string cmd_compare(const std::filesystem::path& reference_dir, const std::vector<std::filesystem::path>& run_dirs);

} // namespace uavmfg
