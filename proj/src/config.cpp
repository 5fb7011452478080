#include "uavmfg/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "uavmfg/errors.hpp"

namespace uavmfg {

namespace pt = boost::property_tree;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key, "expected a number, got '" + text + "'");
    return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& text) {
    Int v{};
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key, "expected an integer, got '" + text + "'");
    return v;
}

Vec4 parse_vec4(const std::string& key, const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> parts;
    for (std::string tok; in >> tok;) parts.push_back(tok);
    if (parts.size() != 4) throw ConfigError(key, "expected 4 numbers, got '" + text + "'");
    Vec4 v;
    for (int k = 0; k < 4; ++k) v[k] = parse_double(key, parts[static_cast<std::size_t>(k)]);
    return v;
}

std::string format_vec4(const Vec4& v) {
    return format_double(v[0]) + " " + format_double(v[1]) + " " + format_double(v[2]) + " " + format_double(v[3]);
}

struct Key {
    std::function<void(Scenario&, const std::string& key, const std::string& value)> set;
    std::function<std::string(const Scenario&)> get; ///< empty: not serialized
};

// Keys grouped by section, in serialization order.
using Table = std::vector<std::pair<std::string, std::vector<std::pair<std::string, Key>>>>;

template <class Field>
Key dbl(Field f) {
    return {[f](Scenario& s, const std::string& k, const std::string& v) { f(s) = parse_double(k, v); },
            [f](const Scenario& s) { return format_double(f(const_cast<Scenario&>(s))); }};
}

template <class Int, class Field>
Key integer(Field f) {
    return {[f](Scenario& s, const std::string& k, const std::string& v) { f(s) = parse_int<Int>(k, v); },
            [f](const Scenario& s) { return std::to_string(f(const_cast<Scenario&>(s))); }};
}

const Table& table() {
    static const Table t = {
        {"scenario",
         {
             {"n_uavs", integer<int>([](Scenario& s) -> int& { return s.n_uavs; })},
             {"source_x", dbl([](Scenario& s) -> double& { return s.source_center.x(); })},
             {"source_y", dbl([](Scenario& s) -> double& { return s.source_center.y(); })},
             {"grid_spacing", dbl([](Scenario& s) -> double& { return s.grid_spacing; })},
             {"controller",
              {[](Scenario& s, const std::string&, const std::string& v) { s.controller = controller_from_string(v); },
               [](const Scenario& s) { return to_string(s.controller); }}},
             {"dt", dbl([](Scenario& s) -> double& { return s.dt; })},
             {"max_steps", integer<int>([](Scenario& s) -> int& { return s.max_steps; })},
             {"k_inner", integer<int>([](Scenario& s) -> int& { return s.k_inner; })},
             {"dest_tol", dbl([](Scenario& s) -> double& { return s.dest_tol; })},
             {"seed", integer<std::uint64_t>([](Scenario& s) -> std::uint64_t& { return s.seed; })},
         }},
        {"wind",
         {
             {"c0", dbl([](Scenario& s) -> double& { return s.wind.c0; })},
             {"vo_x", dbl([](Scenario& s) -> double& { return s.wind.v_o.x(); })},
             {"vo_y", dbl([](Scenario& s) -> double& { return s.wind.v_o.y(); })},
             {"Vo_xx", dbl([](Scenario& s) -> double& { return s.wind.V_o(0, 0); })},
             {"Vo_xy", dbl([](Scenario& s) -> double& { return s.wind.V_o(0, 1); })},
             {"Vo_yx", dbl([](Scenario& s) -> double& { return s.wind.V_o(1, 0); })},
             {"Vo_yy", dbl([](Scenario& s) -> double& { return s.wind.V_o(1, 1); })},
         }},
        {"cost",
         {
             {"c1", dbl([](Scenario& s) -> double& { return s.cost.c1; })},
             {"c2", dbl([](Scenario& s) -> double& { return s.cost.c2; })},
             {"c3", dbl([](Scenario& s) -> double& { return s.cost.c3; })},
             {"c4", dbl([](Scenario& s) -> double& { return s.cost.c4; })},
             {"beta", dbl([](Scenario& s) -> double& { return s.cost.beta; })},
             {"eps", dbl([](Scenario& s) -> double& { return s.cost.eps; })},
             {"r_singularity_tol", dbl([](Scenario& s) -> double& { return s.cost.r_singularity_tol; })},
         }},
        {"comms",
         {
             {"tx_power_mw", dbl([](Scenario& s) -> double& { return s.comms.tx_power; })},
             {"noise_power_mw", dbl([](Scenario& s) -> double& { return s.comms.noise_power; })},
             {"snr_threshold_db",
              {[](Scenario& s, const std::string& k, const std::string& v) {
                   s.comms.snr_threshold = db_to_linear(parse_double(k, v));
               },
               {}}},
             {"snr_threshold", dbl([](Scenario& s) -> double& { return s.comms.snr_threshold; })},
             {"path_loss_exp", dbl([](Scenario& s) -> double& { return s.comms.path_loss_exp; })},
         }},
        {"train",
         {
             {"mu", dbl([](Scenario& s) -> double& { return s.train.mu; })},
             {"c_H", dbl([](Scenario& s) -> double& { return s.train.c_H; })},
             {"grad_fd_step", dbl([](Scenario& s) -> double& { return s.train.grad_fd_step; })},
         }},
        {"mean_field",
         {
             {"points_per_axis", integer<int>([](Scenario& s) -> int& { return s.mf_points_per_axis; })},
             {"domain_inflation", dbl([](Scenario& s) -> double& { return s.mf_domain_inflation; })},
             {"domain_min_half_width", dbl([](Scenario& s) -> double& { return s.mf_domain_min_half_width; })},
             {"kde_bandwidth_floor", dbl([](Scenario& s) -> double& { return s.kde.bandwidth_floor; })},
             {"domain_lower",
              {[](Scenario& s, const std::string& k, const std::string& v) {
                   if (!s.mf_domain) s.mf_domain = IntegrationDomain{Vec4::Zero(), Vec4::Zero(), 0};
                   s.mf_domain->lower = parse_vec4(k, v);
               },
               [](const Scenario& s) { return s.mf_domain ? format_vec4(s.mf_domain->lower) : std::string(); }}},
             {"domain_upper",
              {[](Scenario& s, const std::string& k, const std::string& v) {
                   if (!s.mf_domain) s.mf_domain = IntegrationDomain{Vec4::Zero(), Vec4::Zero(), 0};
                   s.mf_domain->upper = parse_vec4(k, v);
               },
               [](const Scenario& s) { return s.mf_domain ? format_vec4(s.mf_domain->upper) : std::string(); }}},
         }},
        {"scaling",
         {
             {"hjb_offset", {[](Scenario& s, const std::string& k, const std::string& v) { s.hjb_scaling.offset = parse_vec4(k, v); },
                             [](const Scenario& s) { return format_vec4(s.hjb_scaling.offset); }}},
             {"hjb_scale", {[](Scenario& s, const std::string& k, const std::string& v) { s.hjb_scaling.scale = parse_vec4(k, v); },
                            [](const Scenario& s) { return format_vec4(s.hjb_scaling.scale); }}},
             {"fpk_offset", {[](Scenario& s, const std::string& k, const std::string& v) { s.fpk_scaling.offset = parse_vec4(k, v); },
                             [](const Scenario& s) { return format_vec4(s.fpk_scaling.offset); }}},
             {"fpk_scale", {[](Scenario& s, const std::string& k, const std::string& v) { s.fpk_scaling.scale = parse_vec4(k, v); },
                            [](const Scenario& s) { return format_vec4(s.fpk_scaling.scale); }}},
         }},
    };
    return t;
}

const Key* find_key(const std::string& section, const std::string& key) {
    for (const auto& [sec, keys] : table()) {
        if (sec != section) continue;
        for (const auto& [name, k] : keys)
            if (name == key) return &k;
    }
    return nullptr;
}

Scenario from_ptree(const pt::ptree& tree) {
    Scenario sc;
    bool snr_db = false, snr_linear = false;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError(section, "keys must live inside a [section]");
        for (const auto& [name, node] : body) {
            const std::string full = section + "." + name;
            const Key* k = find_key(section, name);
            if (!k) throw ConfigError(full, "unknown key");
            k->set(sc, full, node.data());
            if (full == "comms.snr_threshold_db") snr_db = true;
            if (full == "comms.snr_threshold") snr_linear = true;
        }
    }
    if (snr_db && snr_linear)
        throw ConfigError("comms.snr_threshold", "set either snr_threshold_db or snr_threshold, not both");
    if (sc.mf_domain) {
        sc.mf_domain->points_per_axis = sc.mf_points_per_axis;
        if (!(sc.mf_domain->upper.array() > sc.mf_domain->lower.array()).all())
            throw ConfigError("mean_field.domain_lower", "domain_lower and domain_upper must both be set, lower < upper");
    }
    sc.validate();
    return sc;
}

} // namespace

Scenario parse_config_string(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", std::string("malformed config: ") + e.what());
    }
    return from_ptree(tree);
}

Scenario parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_string(buf.str());
}

std::string serialize_config(const Scenario& sc) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [section, keys] : table()) {
        if (!first) out << '\n';
        first = false;
        out << '[' << section << "]\n";
        for (const auto& [name, k] : keys) {
            if (!k.get) continue;
            const std::string v = k.get(sc);
            if (v.empty()) continue;
            out << name << " = " << v << '\n';
        }
    }
    return out.str();
}

} // namespace uavmfg
