#pragma once

#include <string>
#include <vector>

#include "flc/dfa.hpp"

namespace flc::builders {

/// Accepts when the last `k` symbols are one and the same counted symbol.
/// Symbols listed in `neutral` reset every run (the "zero token"); any other
/// symbol resets runs of a different symbol. Result is minimized.
Dfa successive_identical(const Alphabet& alphabet, unsigned k,
                         const std::vector<std::string>& neutral = {});

/// Symbol i of the alphabet stands for a discretized magnitude of
/// i * increment. Accepts when the sum over the last `window` steps (fewer at
/// the start of a word) is strictly greater than `threshold`. The comparison
/// is done in whole increments. Result is minimized.
Dfa sum_threshold(const Alphabet& alphabet, double increment, unsigned window, double threshold);

/// One state per "last symbol read" plus the start state; accepting states are
/// those reached by a symbol in `accept`. Deliberately left unminimized so the
/// recognizer state carries the last token (e.g. the proximity level) for
/// state augmentation; its language is `.* (accept...)`.
Dfa last_token(const Alphabet& alphabet, const std::vector<std::string>& accept);

}  // namespace flc::builders
