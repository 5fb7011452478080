#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include <Eigen/Core>

#include "uavmfg/state.hpp"

namespace uavmfg {

/// Ornstein-Uhlenbeck wind acting on the UAV velocity:
///   dv = a dt - c0 (v - v_o) dt + V_o dW
struct WindModel {
    double c0 = 0.1;              ///< drag constant [1/s]
    Vec2 v_o{1.0, -1.0};          ///< mean wind velocity [m/s]
    Mat2 V_o = 0.1 * Mat2::Identity(); ///< noise factor [m/s per sqrt(s)]

    void validate() const;
    bool operator==(const WindModel&) const = default;
};

/// Linear system ds = (A s + B (a + c0 v_o)) dt + G dW in (r, v) order.
struct SystemMatrices {
    Eigen::Matrix4d A;
    Eigen::Matrix<double, 4, 2> B;
    Eigen::Matrix<double, 4, 2> G;

    static SystemMatrices from(const WindModel& w);
};

/// Counter-based generator: the n-th output is a SplitMix64 finalizer applied to
/// (key + n * golden), so a stream is fully described by (key, counter).
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng() = default;
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    std::uint64_t counter() const { return counter_; }
    bool operator==(const CounterRng&) const = default;

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

/// Per-UAV random stream producing standard normals.
class RandomStream {
public:
    RandomStream() = default;
    RandomStream(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

    double normal();
    Vec2 normal2() { double a = normal(); return {a, normal()}; }

private:
    CounterRng rng_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

/// Drift of the state under dW = 0, in (r, v) order: [v; a - c0 (v - v_o)].
Vec4 nominal_derivative(const UavState& s, const Vec2& a, const WindModel& w);

/// One Euler-Maruyama step. Position advances with the pre-update velocity.
UavState step(const UavState& s, const Vec2& a, const WindModel& w, double dt, RandomStream& rng);

/// Same update with an explicit standard-normal draw xi.
UavState step_with_noise(const UavState& s, const Vec2& a, const WindModel& w, double dt, const Vec2& xi);

} // namespace uavmfg
