// Serial reference paths against the OpenMP kernels.
#include <benchmark/benchmark.h>

#include "rydspec/campaign.hpp"
#include "rydspec/locator.hpp"
#include "rydspec/spectra.hpp"

using namespace rydspec;

static Execution mode(const benchmark::State& s) { return s.range(0) ? Execution::parallel : Execution::serial; }

static void BM_Ensemble(benchmark::State& state) {
    const EnsembleSpec spec{EnsembleKind::rydberg, 500, 0.25};
    for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(spec, 8, 1, 0, mode(state)));
}
BENCHMARK(BM_Ensemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Eigenvalues(benchmark::State& state) {
    const auto m = sample_realization({EnsembleKind::rydberg, static_cast<std::size_t>(state.range(0)), 0.0}, 3);
    for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(m));
}
BENCHMARK(BM_Eigenvalues)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_TriangleGenerator(benchmark::State& state) {
    F2Settings s;
    s.directions = 1u << 12;
    const F2Integrator f2(0.5, s);
    for (auto _ : state) benchmark::DoNotOptimize(f2.evaluate(Complex(0.3, -0.4), mode(state)));
}
BENCHMARK(BM_TriangleGenerator)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_HighConcentration(benchmark::State& state) {
    const HighConcentrationKernel k(0.75);
    for (auto _ : state) benchmark::DoNotOptimize(k.evaluate(Complex(0.3, -0.4), mode(state)));
}
BENCHMARK(BM_HighConcentration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_CouplingMoments(benchmark::State& state) {
    const auto g = GeometryParams::make(1000, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(decorrelated_coupling_moments(g, 1u << 20, 1, mode(state)));
}
BENCHMARK(BM_CouplingMoments)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
