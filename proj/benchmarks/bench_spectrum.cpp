#include <benchmark/benchmark.h>

#include "cocycle/spectrum.hpp"
#include "fixtures.hpp"

using namespace cocycle;

static void BM_LyapunovSpectrum(benchmark::State& state) {
  const auto ex = bench::theorem_c();
  const auto dyn = bench::golden_rotation();
  const auto spec = MeasureSpec::bernoulli({0.5, 0.5});
  for (auto _ : state)
    benchmark::DoNotOptimize(lyapunov_spectrum(ex.gen, dyn, spec, state.range(0), 1, 1, {5, -1, false, 1}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LyapunovSpectrum)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ExteriorPowerSpectrum(benchmark::State& state) {
  const auto ex = bench::theorem_c();
  const auto gen = exterior_power(ex.gen, 2);
  const auto dyn = bench::golden_rotation();
  const auto spec = MeasureSpec::bernoulli({0.5, 0.5});
  for (auto _ : state)
    benchmark::DoNotOptimize(lyapunov_spectrum(gen, dyn, spec, 5000, 1, 1, {5, -1, false, 1}));
}
BENCHMARK(BM_ExteriorPowerSpectrum)->Unit(benchmark::kMillisecond);
