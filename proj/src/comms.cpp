#include "uavmfg/comms.hpp"

#include <cmath>

#include "uavmfg/errors.hpp"

namespace uavmfg {

void CommsConfig::validate() const {
    if (!(tx_power > 0.0)) throw InvalidArgument("comms: tx_power must be positive");
    if (!(noise_power > 0.0)) throw InvalidArgument("comms: noise_power must be positive");
    if (!(snr_threshold > 0.0)) throw InvalidArgument("comms: snr_threshold must be positive");
    if (!(path_loss_exp >= 2.0)) throw InvalidArgument("comms: path_loss_exp must be at least 2");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

double comm_range(const CommsConfig& c) {
    const double ratio = c.tx_power / (c.snr_threshold * c.noise_power);
    if (c.path_loss_exp == 2.0) return std::sqrt(ratio);
    return std::pow(ratio, 1.0 / c.path_loss_exp);
}

std::vector<std::size_t> neighbors(std::span<const UavState> states, std::size_t i, double d) {
    if (i >= states.size()) throw std::out_of_range("neighbors: index " + std::to_string(i) + " out of range");
    std::vector<std::size_t> out;
    const double d2 = d * d;
    for (std::size_t j = 0; j < states.size(); ++j) {
        if (j == i) continue;
        if ((states[j].r - states[i].r).squaredNorm() <= d2) out.push_back(j);
    }
    return out;
}

void CountLedger::record(std::uint64_t n) {
    if (per_step.empty()) per_step.push_back(0);
    per_step.back() += n;
    cumulative += n;
}

ExchangeLedger record_exchange(ExchangeLedger ledger, std::uint64_t n_messages) {
    ledger.record(n_messages);
    return ledger;
}

} // namespace uavmfg
