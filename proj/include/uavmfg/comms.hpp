#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavmfg/state.hpp"

namespace uavmfg {

/// Path-loss link budget. Powers in mW, SNR threshold as a linear ratio.
struct CommsConfig {
    double tx_power = 1e-3;
    double noise_power = 1e-2;
    double snr_threshold = 0.1;
    double path_loss_exp = 2.0;

    void validate() const;
    bool operator==(const CommsConfig&) const = default;
};

double db_to_linear(double db);
double linear_to_db(double ratio);

/// d = (P / (theta sigma^2))^(1/alpha) [m].
double comm_range(const CommsConfig& c);

/// Indices j != i with |r_j - r_i| <= d, ascending.
std::vector<std::size_t> neighbors(std::span<const UavState> states, std::size_t i, double d);

/// Per-step event counts with a running total. Used for directed (sender,
/// receiver) state messages and for gradient evaluations.
struct CountLedger {
    std::vector<std::uint64_t> per_step;
    std::uint64_t cumulative = 0;

    /// Adds n messages to the current (last) step, opening step 0 if needed.
    void record(std::uint64_t n);
    /// Opens a new step with zero messages.
    void next_step() { per_step.push_back(0); }

    bool operator==(const CountLedger&) const = default;
};

using ExchangeLedger = CountLedger;

ExchangeLedger record_exchange(ExchangeLedger ledger, std::uint64_t n_messages);

} // namespace uavmfg
