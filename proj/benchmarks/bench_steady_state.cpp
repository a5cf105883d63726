#include <benchmark/benchmark.h>

#include "firmscale/numeric.hpp"
#include "firmscale/statics.hpp"
#include "firmscale/steady_state.hpp"

using namespace firmscale;

static void BM_SteadyStateClosedForm(benchmark::State& state) {
    const ModelParams p;
    for (auto _ : state) benchmark::DoNotOptimize(solve_closed_form(p));
}
BENCHMARK(BM_SteadyStateClosedForm);

static void BM_SteadyStateNewton(benchmark::State& state) {
    const ModelParams p;
    for (auto _ : state) benchmark::DoNotOptimize(solve_numeric(p));
}
BENCHMARK(BM_SteadyStateNewton);

static void BM_NuSweep(benchmark::State& state) {
    ModelParams base;
    base.mu = 1.21;
    base.phi = 0.135;
    base.kappa = 0.03;
    const auto grid = linspace(0.99, 1.05, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep(base, Axis::nu, grid, 1));
}
BENCHMARK(BM_NuSweep)->Arg(16)->Arg(64);
