#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "flc/constraint.hpp"
#include "flc/regex.hpp"

namespace flc {

/// Whole-word regex match by direct interpretation of the syntax tree
/// (sets of reachable end positions). Shares nothing with automaton
/// construction, so it serves as a reference for compile().
bool regex_matches(const RegexAst& ast, std::span<const SymbolId> word);

using LanguagePredicate = std::function<bool(std::span<const SymbolId>)>;

/// Reference membership test for a spec: regex interpretation for patterns,
/// the builder's defining property for builders. Throws ValidationError for
/// specs compiled with the reset heuristic, whose language is not the regex's.
LanguagePredicate reference_predicate(const ConstraintSpec& spec);

struct OracleReport {
  bool agree = true;
  bool exhaustive = true;
  std::size_t words_checked = 0;
  std::optional<Word> counterexample;
};

/// Compares the spec's automaton with reference_predicate() on every word of
/// length <= max_len when there are at most `exhaustive_limit` of them,
/// otherwise on `samples` uniformly drawn lengths and symbols (seeded).
OracleReport check_against_oracle(const ConstraintSpec& spec, std::size_t max_len,
                                  std::size_t exhaustive_limit = 20'000'000, std::size_t samples = 10'000,
                                  std::uint64_t seed = 0);

}  // namespace flc
