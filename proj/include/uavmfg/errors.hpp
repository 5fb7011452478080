#pragma once

#include <stdexcept>
#include <string>

#include "uavmfg/state.hpp"

namespace uavmfg {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised by configuration parsing and scenario validation. Carries the offending key.
struct ConfigError : std::runtime_error {
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct ComparisonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Training produced a non-finite gradient, weight or action at `state`.
struct TrainingDivergence : std::runtime_error {
    TrainingDivergence(const UavState& s, const std::string& what)
        : std::runtime_error(what), state(s) {}
    UavState state;
};

} // namespace uavmfg
