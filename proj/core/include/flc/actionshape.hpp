#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "flc/constraint.hpp"

namespace flc {

using ActionId = std::int64_t;

/// Builds the transition an action would produce from the current
/// environment state, without stepping the environment.
using TransitionPredictor = std::function<Transition(ActionId)>;

struct FilterResult {
  /// Highest-ranked action whose token keeps every recognizer out of F;
  /// empty when all candidates violate (the caller should fall back).
  std::optional<ActionId> chosen;
  std::size_t masked_count = 0;

  bool empty_action_set() const noexcept { return !chosen.has_value(); }
};

/// One-step lookahead over `ranked` (best first). Recognizers are not
/// advanced. Throws ValidationError for an empty ranking or duplicates.
FilterResult filter_action(const RecognizerRuntime& runtime, std::span<const ActionId> ranked,
                           const TransitionPredictor& predict);
FilterResult filter_action(std::span<const RecognizerRuntime> runtimes, std::span<const ActionId> ranked,
                           const TransitionPredictor& predict);

/// Token-level lookahead for hosts that already translated their actions:
/// `ranked` holds one symbol per candidate, best first, and `chosen` is an
/// index into it. Repeated symbols are allowed. Throws ValidationError when
/// `ranked` is empty.
FilterResult filter_tokens(const RecognizerRuntime& runtime, std::span<const SymbolId> ranked);

enum class HardMode { kTrainAndEval, kTrainOnly, kEvalOnly };
enum class Phase { kTrain, kEval };

/// Whether action filtering is active in `phase`.
constexpr bool enforcement_schedule(HardMode mode, Phase phase) noexcept {
  switch (mode) {
    case HardMode::kTrainAndEval: return true;
    case HardMode::kTrainOnly: return phase == Phase::kTrain;
    case HardMode::kEvalOnly: return phase == Phase::kEval;
  }
  return false;
}

/// `both`, `train`, `eval`. Throws ConfigError.
HardMode parse_hard_mode(std::string_view text);
const char* to_string(HardMode mode);

}  // namespace flc
