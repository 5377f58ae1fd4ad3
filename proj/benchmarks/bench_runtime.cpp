#include <benchmark/benchmark.h>

#include <memory>
#include <numeric>
#include <vector>

#include "flc/actionshape.hpp"
#include "flc/constraint.hpp"
#include "flc/envs.hpp"
#include "flc/rng.hpp"

using namespace flc;

static void BM_StepSymbol(benchmark::State& state) {
  auto spec = std::make_shared<const ConstraintSpec>(load_spec("dithering-2d.flc"));
  RecognizerRuntime rt(spec);
  Rng rng(1);
  std::vector<SymbolId> stream(4096);
  for (auto& s : stream) s = static_cast<SymbolId>(rng.uniform_int(spec->alphabet.size()));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rt.step_symbol(stream[i++ & 4095]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepSymbol);

// Translation from an environment transition plus the automaton step.
static void BM_StepTransition(benchmark::State& state) {
  RecognizerRuntime rt(std::make_shared<const ConstraintSpec>(load_spec("proximity.flc")));
  HazardGrid2D env(9, 9, 6, 1u << 30, 3);
  env.reset();
  const auto t = env.predict(1);
  for (auto _ : state) benchmark::DoNotOptimize(rt.step(t));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepTransition);

static void BM_FilterAction(benchmark::State& state) {
  RecognizerRuntime rt(std::make_shared<const ConstraintSpec>(load_spec("proximity.flc")));
  HazardGrid2D env(9, 9, 6, 1u << 30, 3);
  env.reset();
  std::vector<ActionId> ranked(env.num_actions());
  std::iota(ranked.begin(), ranked.end(), 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(filter_action(rt, ranked, [&](ActionId a) { return env.predict(a); }));
}
BENCHMARK(BM_FilterAction);
BENCHMARK_MAIN();
