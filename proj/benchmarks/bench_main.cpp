#include <benchmark/benchmark.h>

#include "lgset/analytic.hpp"
#include "lgset/oracle.hpp"
#include "lgset/set_sim.hpp"

using namespace lgset;

static void BM_JsmdMatrix(benchmark::State& state) {
    const auto g = BeamGeometry::from_gammas(2.03, 2.03);
    const int p = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(jsmd_matrix(LRange{-6, 6}, p, p, g));
}
BENCHMARK(BM_JsmdMatrix)->Arg(0)->Arg(2)->Arg(8);

static void BM_OverlapNumeric(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const OverlapKernel k{1e-3, LGIndex{3, p}, 0.5e-3, LGIndex{-3, p}, 0.5e-3};
    for (auto _ : state) benchmark::DoNotOptimize(overlap_amplitude_numeric(k));
}
BENCHMARK(BM_OverlapNumeric)->Arg(0)->Arg(2);

static void BM_ValidateGrid(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(validate_against_analytic(6, 2, {0.5, 1.0, 2.03, 3.05}, 1e-6));
}
BENCHMARK(BM_ValidateGrid)->Unit(benchmark::kMillisecond);

static void BM_EstimateJsmd(benchmark::State& state) {
    auto c = SetExperimentConfig::with_defaults(BeamGeometry::from_gammas(2.03, 2.03));
    c.calibrated = state.range(0) != 0;
    c.dark_rate_hz = 200.0;
    c.peak_rate_hz = 2000.0;
    for (auto _ : state) {
        ++c.rng_seed;
        benchmark::DoNotOptimize(estimate_jsmd(c));
    }
}
BENCHMARK(BM_EstimateJsmd)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
