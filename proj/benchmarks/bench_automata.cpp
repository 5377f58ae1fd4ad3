#include <benchmark/benchmark.h>

#include "flc/constraint.hpp"
#include "flc/dfa.hpp"

using namespace flc;

static void BM_LoadBuiltin(benchmark::State& state, const char* name) {
  for (auto _ : state) benchmark::DoNotOptimize(load_spec(name));
}
BENCHMARK_CAPTURE(BM_LoadBuiltin, dithering_1d, "dithering-1d.flc");
BENCHMARK_CAPTURE(BM_LoadBuiltin, overactuation_2d, "overactuation-2d.flc");
// 360-branch alternation; dominated by subset construction.
BENCHMARK_CAPTURE(BM_LoadBuiltin, dithering_2d, "dithering-2d.flc")->Unit(benchmark::kMillisecond);

static void BM_EquivalenceSelf(benchmark::State& state) {
  const auto s = load_spec("dithering-2d.flc");
  for (auto _ : state) benchmark::DoNotOptimize(equivalent(*s.dfa, *s.dfa));
}
BENCHMARK(BM_EquivalenceSelf);
