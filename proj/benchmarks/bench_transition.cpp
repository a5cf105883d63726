#include <benchmark/benchmark.h>

#include "firmscale/transition.hpp"

using namespace firmscale;

static void BM_TransitionNewton(benchmark::State& state) {
    const ModelParams p;
    const SteadyState ss = solve_closed_form(p);
    const int horizon = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_transition(p, 0.9 * ss.K, horizon));
}
BENCHMARK(BM_TransitionNewton)->Arg(100)->Arg(200)->Arg(800);

static void BM_TransitionShooting(benchmark::State& state) {
    const ModelParams p;
    const SteadyState ss = solve_closed_form(p);
    for (auto _ : state) benchmark::DoNotOptimize(solve_by_shooting(p, 0.9 * ss.K, 200));
}
BENCHMARK(BM_TransitionShooting);
