#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "uavmfg/engine.hpp"

namespace uavmfg {

/// Reads an INI-style scenario file. Every key is optional; unset keys keep the
/// Scenario defaults. Unknown keys, malformed values and invariant violations
/// raise ConfigError naming the key as "section.key".
Scenario parse_config(const std::filesystem::path& path);
Scenario parse_config_string(const std::string& text);

/// Writes every key with round-trip exact numbers; parse_config_string of the
/// result reproduces the scenario.
std::string serialize_config(const Scenario& sc);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

} // namespace uavmfg
