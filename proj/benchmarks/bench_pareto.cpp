#include <benchmark/benchmark.h>

#include "firmscale/firms.hpp"
#include "firmscale/pareto.hpp"

using namespace firmscale;

static void BM_PowerMeanQuadrature(benchmark::State& state) {
    const ModelParams p;
    for (auto _ : state) benchmark::DoNotOptimize(power_mean_quadrature(0.3, p));
}
BENCHMARK(BM_PowerMeanQuadrature);

static void BM_SamplePanel(benchmark::State& state) {
    const ModelParams p;
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_panel(n, 42, p, 1.2, 1));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SamplePanel)->Arg(1 << 14)->Arg(1 << 18);

static void BM_AggregationQuadrature(benchmark::State& state) {
    const ModelParams p;
    const SteadyState ss = solve_closed_form(p);
    for (auto _ : state) benchmark::DoNotOptimize(aggregation_check_quadrature(ss, p));
}
BENCHMARK(BM_AggregationQuadrature);
