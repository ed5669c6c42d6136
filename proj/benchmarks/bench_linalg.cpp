#include <benchmark/benchmark.h>

#include "cocycle/linalg.hpp"
#include "cocycle/random.hpp"

using namespace cocycle;

static void BM_CompoundMatrix(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(1);
  const Matrix a = random_gaussian(d, d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(compound_matrix(a, d / 2));
}
BENCHMARK(BM_CompoundMatrix)->Arg(3)->Arg(4)->Arg(6)->Arg(8);

static void BM_QrStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(2);
  const Matrix a = random_gaussian(d, d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(qr_step(a));
}
BENCHMARK(BM_QrStep)->Arg(2)->Arg(3)->Arg(6);
