// Serial reference vs OpenMP kernels for one control instant of each controller.
#include <benchmark/benchmark.h>

#include "uavmfg/engine.hpp"

using namespace uavmfg;

namespace {

Scenario scenario(Controller c) {
    Scenario sc;
    sc.controller = c;
    return sc;
}

template <Controller C, Execution E>
void BM_Step(benchmark::State& state) {
    const Scenario sc = scenario(C);
    for (auto _ : state) {
        state.PauseTiming();
        Swarm swarm = make_swarm(sc);
        state.ResumeTiming();
        if constexpr (C == Controller::HjbLearning)
            benchmark::DoNotOptimize(hjb_learning_step(swarm, sc, E));
        else
            benchmark::DoNotOptimize(mfg_learning_step(swarm, sc, E));
    }
}

template <Execution E>
void BM_Run(benchmark::State& state) {
    Scenario sc = scenario(Controller::MfgLearning);
    sc.max_steps = 20;
    for (auto _ : state) benchmark::DoNotOptimize(run(sc, E));
}

} // namespace

BENCHMARK(BM_Step<Controller::HjbLearning, Execution::Serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Step<Controller::HjbLearning, Execution::Parallel>)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Step<Controller::MfgLearning, Execution::Serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Step<Controller::MfgLearning, Execution::Parallel>)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Run<Execution::Serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Run<Execution::Parallel>)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
