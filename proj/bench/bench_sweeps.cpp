// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "bazykin/bifurcation.hpp"
#include "bazykin/simulate.hpp"

namespace {

using namespace bazykin;

const Parameters kSetA{1.0, 1.0, 0.0, 4.0, 0.5, 8.0, 6.0};
const Parameters kCusp{15.0, 0.0, 0.0, 0.01, 0.1, 0.45, 0.28};

void atlas(benchmark::State& state, bool parallel) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto cells = parallel ? region_atlas(kSetA, {0.0, 2.0, n}, {0.0, 5.0, n})
                              : region_atlas_serial(kSetA, {0.0, 2.0, n}, {0.0, 5.0, n});
        benchmark::DoNotOptimize(cells);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}

void cusp(benchmark::State& state, bool parallel) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto map = parallel ? cusp_scan(kCusp, CuspPlane::XiEpsilon, {0.0, 2.0, n}, {0.01, 0.3, n})
                            : cusp_scan_serial(kCusp, CuspPlane::XiEpsilon, {0.0, 2.0, n}, {0.01, 0.3, n});
        benchmark::DoNotOptimize(map);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}

void portrait(benchmark::State& state, bool parallel) {
    std::vector<State> starts;
    for (int i = 0; i < state.range(0); ++i) starts.push_back({0.5 + 0.25 * i, 0.2 + 0.1 * i});
    const Parameters p{15.0, 0.1, 0.45, 0.01, 0.024, 0.45, 0.28};
    for (auto _ : state) {
        auto runs = parallel ? phase_portrait(p, starts, 200.0, 0.01) : phase_portrait_serial(p, starts, 200.0, 0.01);
        benchmark::DoNotOptimize(runs);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(atlas, serial, false)->Arg(24)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(atlas, openmp, true)->Arg(24)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(cusp, serial, false)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(cusp, openmp, true)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(portrait, serial, false)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(portrait, openmp, true)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
