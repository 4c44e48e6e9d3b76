// Serial reference vs OpenMP path for the two parallel kernels.
// Run with OMP_NUM_THREADS set to the core count.

#include "squeeze/extreme.hpp"
#include "squeeze/husimi.hpp"
#include "squeeze/optimizer.hpp"

#include <benchmark/benchmark.h>

using namespace squeeze;

namespace {

void husimi(benchmark::State &st, bool parallel) {
    const auto sys = build_system(static_cast<int>(st.range(0)));
    const SpinState psi = solve_extreme(sys, 0.9).state;
    for (auto _ : st) {
        HusimiGrid g = parallel ? husimi_grid(psi, 64, 128) : husimi_grid_serial(psi, 64, 128);
        benchmark::DoNotOptimize(g.values.data());
    }
}

void restarts(benchmark::State &st, bool parallel) {
    const auto sys = build_system(static_cast<int>(st.range(0)));
    const SpinState target = solve_extreme(sys, 0.9).state;
    OptimizationConfig cfg;
    cfg.n_starts = 8;
    cfg.max_iterations = 200;
    cfg.parallel = parallel;
    for (auto _ : st) {
        auto runs = run_restarts(sys, target, cfg);
        benchmark::DoNotOptimize(runs.data());
    }
}

} // namespace

BENCHMARK_CAPTURE(husimi, serial, false)->Arg(60)->Arg(350)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(husimi, openmp, true)->Arg(60)->Arg(350)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(restarts, serial, false)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(restarts, openmp, true)->Arg(60)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
