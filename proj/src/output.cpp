#include "uavmfg/output.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "uavmfg/config.hpp"
#include "uavmfg/errors.hpp"

namespace uavmfg {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void check_written(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

template <class T>
T parse_field(const std::string& text, std::size_t line, const char* name) {
    T v{};
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw ParseError(line, std::string("bad value for ") + name + ": '" + text + "'");
    return v;
}

} // namespace

void write_trajectory_csv(const RunLog& log, std::ostream& out) {
    out << kTrajectoryHeader << '\n';
    for (const auto& r : log.records) {
        out << r.step << ',' << format_double(r.t) << ',' << r.uav << ',' << format_double(r.state.r.x()) << ','
            << format_double(r.state.r.y()) << ',' << format_double(r.state.v.x()) << ','
            << format_double(r.state.v.y()) << ',' << format_double(r.action.x()) << ','
            << format_double(r.action.y()) << ',' << format_double(r.loss) << ',' << (r.regularizer_active ? 1 : 0)
            << '\n';
    }
}

void write_trajectory_csv(const RunLog& log, const fs::path& path) {
    auto out = open_out(path);
    write_trajectory_csv(log, out);
    check_written(out, path);
}

std::vector<UavRecord> read_trajectory_csv(std::istream& in) {
    std::vector<UavRecord> rows;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTrajectoryHeader) throw ParseError(1, "unexpected header '" + line + "'");
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            f.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (f.size() != 11) throw ParseError(lineno, "expected 11 fields, got " + std::to_string(f.size()));
        UavRecord r;
        r.step = parse_field<int>(f[0], lineno, "step");
        r.t = parse_field<double>(f[1], lineno, "t");
        r.uav = parse_field<int>(f[2], lineno, "uav");
        r.state.r = {parse_field<double>(f[3], lineno, "x"), parse_field<double>(f[4], lineno, "y")};
        r.state.v = {parse_field<double>(f[5], lineno, "vx"), parse_field<double>(f[6], lineno, "vy")};
        r.action = {parse_field<double>(f[7], lineno, "ax"), parse_field<double>(f[8], lineno, "ay")};
        r.loss = parse_field<double>(f[9], lineno, "loss");
        const int flag = parse_field<int>(f[10], lineno, "reg_active");
        if (flag != 0 && flag != 1) throw ParseError(lineno, "reg_active must be 0 or 1");
        r.regularizer_active = flag == 1;
        rows.push_back(r);
    }
    return rows;
}

std::vector<UavRecord> read_trajectory_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return read_trajectory_csv(in);
}

RunSummary summarize(const RunLog& log) {
    RunSummary s;
    s.controller = to_string(log.controller);
    s.n_uavs = log.n_uavs;
    s.steps_taken = log.steps_taken;
    s.termination = to_string(log.termination);
    s.energy = energy_summary(log);
    s.collisions = log.collisions.size();
    s.divergences = log.divergences.size();
    return s;
}

void write_summary(const RunSummary& s, const fs::path& path) {
    const double n = s.n_uavs > 0 ? s.n_uavs : 1;
    auto out = open_out(path);
    out << "[run]\n"
        << "controller = " << s.controller << '\n'
        << "n_uavs = " << s.n_uavs << '\n'
        << "steps_taken = " << s.steps_taken << '\n'
        << "termination = " << s.termination << '\n'
        << "horizon = " << format_double(s.energy.horizon) << '\n'
        << "\n[energy]\n"
        << "communication = " << s.energy.communication << '\n'
        << "computation = " << s.energy.computation << '\n'
        << "motion = " << format_double(s.energy.motion) << '\n'
        << "communication_per_uav = " << format_double(static_cast<double>(s.energy.communication) / n) << '\n'
        << "computation_per_uav = " << format_double(static_cast<double>(s.energy.computation) / n) << '\n'
        << "motion_per_uav = " << format_double(s.energy.motion / n) << '\n'
        << "\n[collisions]\n"
        << "count = " << s.collisions << '\n'
        << "\n[ledger]\n"
        << "state_exchanges = " << s.energy.communication << '\n'
        << "gradient_evaluations = " << s.energy.computation << '\n'
        << "\n[divergence]\n"
        << "frozen_uavs = " << s.divergences << '\n';
    check_written(out, path);
}

RunSummary read_summary(const fs::path& path) {
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw std::runtime_error("cannot read summary " + path.string() + ": " + e.what());
    }
    try {
        RunSummary s;
        s.controller = tree.get<std::string>("run.controller");
        s.n_uavs = tree.get<int>("run.n_uavs");
        s.steps_taken = tree.get<int>("run.steps_taken");
        s.termination = tree.get<std::string>("run.termination");
        s.energy.horizon = tree.get<double>("run.horizon");
        s.energy.n_uavs = s.n_uavs;
        s.energy.communication = tree.get<std::uint64_t>("energy.communication");
        s.energy.computation = tree.get<std::uint64_t>("energy.computation");
        s.energy.motion = tree.get<double>("energy.motion");
        s.collisions = tree.get<std::size_t>("collisions.count");
        s.divergences = tree.get<std::size_t>("divergence.frozen_uavs");
        return s;
    } catch (const pt::ptree_error& e) {
        throw std::runtime_error("summary " + path.string() + " is incomplete: " + e.what());
    }
}

RunArtifacts cmd_run(const Scenario& sc, const fs::path& out_dir, Execution exec) {
    const RunLog log = run(sc, exec);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
    RunArtifacts a{out_dir / kTrajectoryFile, out_dir / kSummaryFile, {}};
    write_trajectory_csv(log, a.trajectory);
    write_summary(summarize(log), a.summary);
    return a;
}

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 40.0;

struct Frame {
    double xmin, xmax, ymin, ymax;

    double scale() const {
        const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
        return (kCanvas - 2 * kMargin) / span;
    }
    std::string transform() const {
        const double s = scale();
        // World (x, y) to screen, y axis up.
        return "matrix(" + format_double(s) + " 0 0 " + format_double(-s) + " " +
               format_double(kMargin - s * xmin) + " " + format_double(kCanvas - kMargin + s * ymin) + ")";
    }
};

void svg_open(std::ostream& out, const std::string& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\"" << kCanvas
        << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n"
        << "<title>" << title << "</title>\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

fs::path write_trajectory_svg(const std::vector<UavRecord>& rows, const fs::path& path) {
    std::map<int, std::vector<Vec2>> paths;
    for (const auto& r : rows) paths[r.uav].push_back(r.state.r);

    Vec2 source = Vec2::Zero();
    std::size_t n0 = 0;
    for (const auto& r : rows)
        if (r.step == 0) {
            source += r.state.r;
            ++n0;
        }
    if (n0) source /= static_cast<double>(n0);

    Frame f{0.0, 0.0, 0.0, 0.0};
    for (const auto& r : rows) {
        f.xmin = std::min(f.xmin, r.state.r.x());
        f.xmax = std::max(f.xmax, r.state.r.x());
        f.ymin = std::min(f.ymin, r.state.r.y());
        f.ymax = std::max(f.ymax, r.state.r.y());
    }
    const double pad = 0.05 * std::max({f.xmax - f.xmin, f.ymax - f.ymin, 1.0});
    f.xmin -= pad;
    f.xmax += pad;
    f.ymin -= pad;
    f.ymax += pad;
    const double px = 1.0 / f.scale(); // one screen pixel in world units

    auto out = open_out(path);
    svg_open(out, "UAV trajectories");
    out << "<g id=\"world\" transform=\"" << f.transform() << "\">\n";
    for (const auto& [uav, pts] : paths) {
        if (pts.size() < 2) continue;
        out << "<polyline class=\"path\" data-uav=\"" << uav << "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\""
            << format_double(px) << "\" points=\"";
        for (std::size_t k = 0; k < pts.size(); ++k)
            out << (k ? " " : "") << format_double(pts[k].x()) << ',' << format_double(pts[k].y());
        out << "\"/>\n";
    }
    if (n0)
        out << "<circle id=\"source\" cx=\"" << format_double(source.x()) << "\" cy=\"" << format_double(source.y())
            << "\" r=\"" << format_double(6 * px) << "\" fill=\"green\"/>\n";
    out << "<circle id=\"destination\" cx=\"0\" cy=\"0\" r=\"" << format_double(6 * px) << "\" fill=\"red\"/>\n";
    out << "</g>\n</svg>\n";
    check_written(out, path);
    return path;
}

fs::path write_regularizer_svg(const std::vector<UavRecord>& rows, const fs::path& path) {
    int last = 0;
    for (const auto& r : rows) last = std::max(last, r.step);
    std::vector<double> series(static_cast<std::size_t>(last) + 1, 0.0);
    for (const auto& r : rows)
        if (r.regularizer_active) series[static_cast<std::size_t>(r.step)] += 1.0;
    for (std::size_t k = 1; k < series.size(); ++k) series[k] += series[k - 1];

    const double ymax = std::max(series.back(), 1.0);
    const double sx = (kCanvas - 2 * kMargin) / std::max(last, 1);
    const double sy = (kCanvas - 2 * kMargin) / ymax;

    auto out = open_out(path);
    svg_open(out, "Accumulated regularizer activations");
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kCanvas - kMargin << "\" x2=\"" << kCanvas - kMargin
        << "\" y2=\"" << kCanvas - kMargin << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
        << kCanvas - kMargin << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kCanvas / 2 << "\" y=\"" << kCanvas - 10 << "\" text-anchor=\"middle\">step (last "
        << last << ")</text>\n"
        << "<text x=\"" << kMargin << "\" y=\"" << kMargin - 10 << "\">activations (max " << format_double(ymax)
        << ")</text>\n"
        << "<polyline id=\"series\" fill=\"none\" stroke=\"darkred\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < series.size(); ++k)
        out << (k ? " " : "") << format_double(kMargin + sx * static_cast<double>(k)) << ','
            << format_double(kCanvas - kMargin - sy * series[k]);
    out << "\"/>\n</svg>\n";
    check_written(out, path);
    return path;
}

} // namespace

std::vector<fs::path> cmd_plot(const fs::path& trajectory_csv, const fs::path& out_dir) {
    const auto rows = read_trajectory_csv(trajectory_csv);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
    return {write_trajectory_svg(rows, out_dir / kTrajectoryPlotFile),
            write_regularizer_svg(rows, out_dir / kRegularizerPlotFile)};
}

std::string cmd_compare(const fs::path& reference_dir, const std::vector<fs::path>& run_dirs) {
    if (run_dirs.empty()) throw std::invalid_argument("compare: need at least one run besides the reference");
    auto load = [](const fs::path& dir) {
        const fs::path p = dir / kSummaryFile;
        if (!fs::exists(p)) throw std::runtime_error("missing summary " + p.string());
        return read_summary(p);
    };
    const RunSummary ref = load(reference_dir);
    auto ratio = [](const std::optional<double>& r) { return r ? format_double(*r) : std::string("n/a"); };

    std::ostringstream out;
    out << "run,controller,communication,computation,motion,communication_ratio,computation_ratio,motion_ratio\n";
    auto row = [&](const fs::path& dir, const RunSummary& s) {
        const EnergyRatios r = energy_ratios(s.energy, ref.energy);
        out << dir.string() << ',' << s.controller << ',' << s.energy.communication << ',' << s.energy.computation
            << ',' << format_double(s.energy.motion) << ',' << ratio(r.communication) << ','
            << ratio(r.computation) << ',' << ratio(r.motion) << '\n';
    };
    row(reference_dir, ref);
    for (const auto& d : run_dirs) row(d, load(d));
    return out.str();
}

} // namespace uavmfg
