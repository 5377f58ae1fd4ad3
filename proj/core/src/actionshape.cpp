#include "flc/actionshape.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "flc/error.hpp"

namespace flc {

namespace {

void check_ranking(std::span<const ActionId> ranked) {
  if (ranked.empty()) throw ValidationError("ranked action list is empty");
  std::vector<ActionId> sorted(ranked.begin(), ranked.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("ranked action list contains duplicates");
  }
}

}  // namespace

FilterResult filter_action(std::span<const RecognizerRuntime> runtimes, std::span<const ActionId> ranked,
                           const TransitionPredictor& predict) {
  check_ranking(ranked);
  FilterResult result;
  for (ActionId action : ranked) {
    const Transition t = predict(action);
    bool violates = false;
    for (const auto& rt : runtimes) {
      if (rt.would_violate(t)) {
        violates = true;
        break;
      }
    }
    if (!violates) {
      result.chosen = action;
      return result;
    }
    ++result.masked_count;
  }
  return result;
}

FilterResult filter_action(const RecognizerRuntime& runtime, std::span<const ActionId> ranked,
                           const TransitionPredictor& predict) {
  return filter_action(std::span<const RecognizerRuntime>(&runtime, 1), ranked, predict);
}

FilterResult filter_tokens(const RecognizerRuntime& runtime, std::span<const SymbolId> ranked) {
  if (ranked.empty()) throw ValidationError("ranked token list is empty");
  const Dfa& dfa = runtime.dfa();
  FilterResult result;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (!dfa.is_accepting(dfa.step(runtime.state(), ranked[i]))) {
      result.chosen = static_cast<ActionId>(i);
      return result;
    }
    ++result.masked_count;
  }
  return result;
}

HardMode parse_hard_mode(std::string_view text) {
  if (text == "both") return HardMode::kTrainAndEval;
  if (text == "train") return HardMode::kTrainOnly;
  if (text == "eval") return HardMode::kEvalOnly;
  throw ConfigError("hard mode must be one of both, train, eval (got '" + std::string(text) + "')");
}

const char* to_string(HardMode mode) {
  switch (mode) {
    case HardMode::kTrainAndEval: return "both";
    case HardMode::kTrainOnly: return "train";
    case HardMode::kEvalOnly: return "eval";
  }
  return "?";
}

}  // namespace flc
