#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "flc/actionshape.hpp"
#include "flc/envs.hpp"
#include "flc/error.hpp"
#include "flc/rng.hpp"

using namespace flc;

namespace {

std::shared_ptr<const ConstraintSpec> dithering() {
  return std::make_shared<const ConstraintSpec>(load_spec("dithering-1d.flc"));
}

TransitionPredictor predictor(const Environment& env) {
  return [&env](ActionId a) { return env.predict(a); };
}

}  // namespace

TEST_SUITE("filter_action") {
  TEST_CASE("masks the move that completes a dither") {
    Corridor1D env(15, 200, 5);
    env.reset();
    RecognizerRuntime rt(dithering());
    for (const char* tok : {"l", "r", "l"}) rt.step_token(tok);
    const StateId before = rt.state();
    const std::vector<ActionId> ranked{Corridor1D::kRight, Corridor1D::kNoop, Corridor1D::kLeft};
    auto res = filter_action(rt, ranked, predictor(env));
    REQUIRE(res.chosen.has_value());
    CHECK(*res.chosen == Corridor1D::kNoop);
    CHECK(res.masked_count == 1);
    CHECK(rt.state() == before);
  }
  TEST_CASE("nothing is masked from the start state") {
    Corridor1D env(15, 200, 5);
    env.reset();
    RecognizerRuntime rt(dithering());
    std::vector<ActionId> ranked{0, 1, 2, 3};
    do {
      auto res = filter_action(rt, ranked, predictor(env));
      CHECK(res.chosen == ranked.front());
      CHECK(res.masked_count == 0);
    } while (std::next_permutation(ranked.begin(), ranked.end()));
  }
  TEST_CASE("every action violating leaves an empty set") {
    auto spec = std::make_shared<const ConstraintSpec>(parse_spec("alphabet = [left right noop interact]\npattern = \".*\"\n"));
    RecognizerRuntime rt(spec);
    Corridor1D env(5, 10);
    env.reset();
    auto predict = [&](ActionId a) {
      Transition t = env.predict(a);
      t.action.token = env.action_name(a);
      return t;
    };
    const std::vector<ActionId> ranked{0, 1, 2, 3};
    auto res = filter_action(rt, ranked, predict);
    CHECK(res.empty_action_set());
    CHECK(res.masked_count == 4);
  }
  TEST_CASE("bad rankings") {
    Corridor1D env(5, 10);
    env.reset();
    RecognizerRuntime rt(dithering());
    CHECK_THROWS_AS(filter_action(rt, std::vector<ActionId>{}, predictor(env)), ValidationError);
    CHECK_THROWS_AS(filter_action(rt, std::vector<ActionId>{1, 1}, predictor(env)), ValidationError);
  }
  TEST_CASE("several recognizers must all stay safe") {
    Corridor1D env(15, 200, 7);
    env.reset();
    std::vector<RecognizerRuntime> rts{RecognizerRuntime(dithering()),
                                       RecognizerRuntime(std::make_shared<const ConstraintSpec>(
                                           load_spec("overactuation-1d.flc")))};
    for (int i = 0; i < 3; ++i) {
      rts[0].step_token("r");
      rts[1].step_token("r");
    }
    // right would over-actuate, left is still fine for both.
    auto res = filter_action(rts, std::vector<ActionId>{Corridor1D::kRight, Corridor1D::kLeft}, predictor(env));
    CHECK(res.chosen == Corridor1D::kLeft);
    CHECK(res.masked_count == 1);
  }
  TEST_CASE("chosen action is the best unmasked one on random streams") {
    Rng rng(77);
    Corridor1D env(15, 100000, 7);
    env.reset();
    RecognizerRuntime rt(dithering());
    std::vector<ActionId> ranked{0, 1, 2, 3};
    for (int i = 0; i < 5000; ++i) {
      for (std::size_t j = ranked.size(); j > 1; --j) std::swap(ranked[j - 1], ranked[rng.uniform_int(j)]);
      auto res = filter_action(rt, ranked, predictor(env));
      std::size_t first_safe = ranked.size();
      for (std::size_t j = 0; j < ranked.size(); ++j) {
        if (!rt.would_violate(env.predict(ranked[j]))) {
          first_safe = j;
          break;
        }
      }
      REQUIRE(first_safe < ranked.size());
      CHECK(res.chosen == ranked[first_safe]);
      CHECK(res.masked_count == first_safe);
      const ActionId a = *res.chosen;
      CHECK_FALSE(rt.step(env.predict(a)).violated);
      env.step(a);
      if (env.done()) env.reset();
    }
  }
}

TEST_SUITE("filter_tokens") {
  TEST_CASE("index into the ranking") {
    RecognizerRuntime rt(dithering());
    for (const char* tok : {"l", "r", "l"}) rt.step_token(tok);
    const auto& ab = rt.spec().alphabet;
    std::vector<SymbolId> ranked{ab.index_of("r"), ab.index_of("n"), ab.index_of("l")};
    auto res = filter_tokens(rt, ranked);
    CHECK(res.chosen == 1);
    CHECK(res.masked_count == 1);
    std::vector<SymbolId> only_r{ab.index_of("r"), ab.index_of("r")};
    auto none = filter_tokens(rt, only_r);
    CHECK(none.empty_action_set());
    CHECK(none.masked_count == 2);
    CHECK_THROWS_AS(filter_tokens(rt, std::vector<SymbolId>{}), ValidationError);
  }
}

TEST_SUITE("schedule") {
  TEST_CASE("phase table") {
    CHECK_FALSE(enforcement_schedule(HardMode::kTrainOnly, Phase::kEval));
    CHECK(enforcement_schedule(HardMode::kTrainOnly, Phase::kTrain));
    CHECK(enforcement_schedule(HardMode::kTrainAndEval, Phase::kTrain));
    CHECK(enforcement_schedule(HardMode::kTrainAndEval, Phase::kEval));
    CHECK_FALSE(enforcement_schedule(HardMode::kEvalOnly, Phase::kTrain));
    CHECK(enforcement_schedule(HardMode::kEvalOnly, Phase::kEval));
  }
  TEST_CASE("names") {
    for (auto m : {HardMode::kTrainAndEval, HardMode::kTrainOnly, HardMode::kEvalOnly}) {
      CHECK(parse_hard_mode(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_hard_mode("sometimes"), ConfigError);
  }
}
