#include <benchmark/benchmark.h>

#include "cocycle/lincocycle.hpp"
#include "fixtures.hpp"

using namespace cocycle;

static void BM_StrongHolonomy(benchmark::State& state) {
  const auto ex = bench::theorem_c();
  const auto dyn = bench::golden_rotation();
  const FiberedPoint p{BiSequence::lazy_random(1, {0.5, 0.5}), 0.3};
  const auto y = BiSequence::splice(BiSequence::lazy_random(2, {0.5, 0.5}), p.base,
                                    -static_cast<std::int64_t>(state.range(0)) + 1);
  const auto q = strong_partner(dyn.family(), p, y, Leaf::Stable);
  for (auto _ : state) benchmark::DoNotOptimize(strong_holonomy(ex.gen, dyn, p, q, Leaf::Stable));
}
BENCHMARK(BM_StrongHolonomy)->Arg(1)->Arg(4)->Arg(16);
