#include "uavmfg/dynamics.hpp"

#include <cmath>

#include "uavmfg/errors.hpp"

namespace uavmfg {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

void WindModel::validate() const {
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw InvalidArgument("wind: c0 must be positive and finite");
    if (!v_o.allFinite()) throw InvalidArgument("wind: v_o must be finite");
    if (!V_o.allFinite()) throw InvalidArgument("wind: V_o must be finite");
}

SystemMatrices SystemMatrices::from(const WindModel& w) {
    SystemMatrices m;
    m.A.setZero();
    m.A.block<2, 2>(0, 2) = Mat2::Identity();
    m.A.block<2, 2>(2, 2) = -w.c0 * Mat2::Identity();
    m.B.setZero();
    m.B.block<2, 2>(2, 0) = Mat2::Identity();
    m.G.setZero();
    m.G.block<2, 2>(2, 0) = w.V_o;
    return m;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed) ^ (stream * kGolden + 0x632BE59BD9B4E019ull))) {}

CounterRng::result_type CounterRng::operator()() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double RandomStream::normal() { return dist_(rng_); }

Vec4 nominal_derivative(const UavState& s, const Vec2& a, const WindModel& w) {
    Vec4 d;
    d.head<2>() = s.v;
    d.tail<2>() = -w.c0 * s.v + (a + w.c0 * w.v_o);
    return d;
}

UavState step_with_noise(const UavState& s, const Vec2& a, const WindModel& w, double dt, const Vec2& xi) {
    if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
    const Vec4 drift = nominal_derivative(s, a, w);
    UavState next;
    next.r = s.r + drift.head<2>() * dt;
    next.v = s.v + drift.tail<2>() * dt + w.V_o * xi * std::sqrt(dt);
    return next;
}

UavState step(const UavState& s, const Vec2& a, const WindModel& w, double dt, RandomStream& rng) {
    if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
    return step_with_noise(s, a, w, dt, rng.normal2());
}

} // namespace uavmfg
