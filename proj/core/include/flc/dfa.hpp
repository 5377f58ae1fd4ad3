#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flc/alphabet.hpp"
#include "flc/regex.hpp"

namespace flc {

/// Complete deterministic automaton (Q, Σ, δ, q0, F). Immutable once built,
/// so one instance can back any number of concurrent recognizers.
class Dfa {
 public:
  /// `delta` is row-major: delta[q * |Σ| + a]. Throws ValidationError unless
  /// every entry, the start state and each accepting index are in range.
  Dfa(Alphabet alphabet, std::size_t num_states, std::vector<StateId> delta, StateId start,
      std::vector<bool> accepting);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t num_states() const noexcept { return num_states_; }
  StateId start() const noexcept { return start_; }
  bool is_accepting(StateId q) const { return accepting_.at(q); }
  std::vector<StateId> accepting_states() const;
  const std::vector<bool>& accepting() const noexcept { return accepting_; }

  /// δ(q, a). Precondition q < |Q|, a < |Σ| (checked; throws IndexError / UnknownSymbol).
  StateId step(StateId q, SymbolId a) const;
  /// Throws UnknownSymbol if the token is not in Σ.
  StateId step(StateId q, std::string_view token) const;

  StateId run(std::span<const SymbolId> word) const;
  StateId run(StateId from, std::span<const SymbolId> word) const;
  bool accepts(std::span<const SymbolId> word) const { return is_accepting(run(word)); }
  bool accepts(const std::vector<std::string>& word) const;

  const std::vector<StateId>& transitions() const noexcept { return delta_; }

 private:
  Alphabet alphabet_;
  std::size_t num_states_;
  std::vector<StateId> delta_;
  StateId start_;
  std::vector<bool> accepting_;
};

inline constexpr std::size_t kDefaultStateBudget = 1'000'000;

struct CompileOptions {
  /// Subset construction aborts with CapacityError beyond this many states.
  std::size_t state_budget = kDefaultStateBudget;
  /// Reproduce the "unrepresented transitions return to q0" drawing style:
  /// a leading `.*` is dropped and every transition into a dead state is
  /// redirected to the start state. Off by default; this is not exact
  /// regex semantics.
  bool reset_heuristic = false;

  /// Defaults with `FLC_STATE_BUDGET` applied when set to a positive integer.
  static CompileOptions from_environment();
};

/// Thompson construction, subset construction, then minimize().
Dfa compile(const RegexAst& ast, const Alphabet& alphabet, const CompileOptions& options = {});
Dfa compile(std::string_view pattern, const Alphabet& alphabet, const CompileOptions& options = {});

/// Drops unreachable states and merges language-equivalent ones. States are
/// renumbered breadth-first from the start state in symbol order, so equal
/// languages always give identical tables.
Dfa minimize(const Dfa& dfa);

struct Equivalence {
  bool equivalent = true;
  /// Shortest word accepted by exactly one automaton (empty when equivalent;
  /// note the empty word itself can also be a witness).
  Word witness;
  explicit operator bool() const noexcept { return equivalent; }
};

/// Breadth-first search of the product automaton. Throws AlphabetMismatch.
Equivalence equivalent(const Dfa& a, const Dfa& b);

enum class ExportFormat { kDot, kJson };

std::string export_dfa(const Dfa& dfa, ExportFormat format);
/// Inverse of the JSON export. Throws ParseError / ValidationError.
Dfa import_json(std::string_view text);

}  // namespace flc
