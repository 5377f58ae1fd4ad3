#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flc/dfa.hpp"
#include "flc/translator.hpp"

namespace flc {

enum class ViolationMode {
  /// Return to q0 right after an accepting state is entered, so violations
  /// within one episode can be counted.
  kReset,
  /// Stay wherever δ leads, including absorbing violation states.
  kAbsorbing,
};

/// A constraint as loaded from a `.flc` file: recognizer, cost assignment,
/// violation semantics, translator and per-episode cost limit.
struct ConstraintSpec {
  std::string name;
  Alphabet alphabet;
  /// Pattern text, or the builder call text.
  std::string source;
  bool from_builder = false;
  /// Compiled with CompileOptions::reset_heuristic.
  bool reset_heuristic = false;
  std::shared_ptr<const Dfa> dfa;
  /// Cost per recognizer state. Non-negative.
  std::vector<double> costs;
  ViolationMode mode = ViolationMode::kReset;
  Translator translator;
  double limit = 0.0;

  double cost(StateId q) const { return costs.at(q); }
};

/// Parse `.flc` text. `origin` only labels error messages. Throws ParseError
/// (line-numbered), ValidationError, SyntaxError, CapacityError.
ConstraintSpec parse_spec(std::string_view text, const CompileOptions& options = CompileOptions::from_environment());

/// Reads `path`. When no such file exists and the file name matches a
/// built-in constraint (e.g. `dithering-1d.flc`), the built-in text is used.
ConstraintSpec load_spec(const std::filesystem::path& path,
                         const CompileOptions& options = CompileOptions::from_environment());

/// Names (file names) and texts of the bundled constraints.
std::vector<std::string> builtin_spec_names();
std::optional<std::string_view> builtin_spec_text(std::string_view file_name);

std::string read_text_file(const std::filesystem::path& path);

struct RecognizerStep {
  StateId q_next = 0;
  double cost = 0.0;
  bool violated = false;
  SymbolId token = 0;
};

/// Live recognizer for one trajectory: c = G ∘ D ∘ T applied per transition.
class RecognizerRuntime {
 public:
  explicit RecognizerRuntime(std::shared_ptr<const ConstraintSpec> spec);

  const ConstraintSpec& spec() const noexcept { return *spec_; }
  const Dfa& dfa() const noexcept { return *spec_->dfa; }

  /// Current recognizer state.
  StateId state() const noexcept { return q_; }

  /// Translates the transition, advances δ and emits G(q_next). In reset mode
  /// the stored state returns to q0 after a violation; the returned q_next is
  /// still the accepting state that was entered.
  RecognizerStep step(const Transition& transition);
  RecognizerStep step_symbol(SymbolId token);
  RecognizerStep step_token(std::string_view token);

  /// δ(q, T(transition)) without changing anything.
  StateId lookahead(const Transition& transition) const;
  /// True when the lookahead state is accepting.
  bool would_violate(const Transition& transition) const;

  /// Back to q0 with per-episode counters cleared; lifetime totals kept.
  void reset();

  std::size_t violation_count() const noexcept { return violations_; }
  double episode_cost() const noexcept { return episode_cost_; }
  std::size_t episode_steps() const noexcept { return episode_steps_; }
  std::size_t total_violations() const noexcept { return total_violations_; }
  double total_cost() const noexcept { return total_cost_; }
  std::size_t total_steps() const noexcept { return total_steps_; }

 private:
  std::shared_ptr<const ConstraintSpec> spec_;
  StateId q_;
  std::size_t violations_ = 0;
  double episode_cost_ = 0.0;
  std::size_t episode_steps_ = 0;
  std::size_t total_violations_ = 0;
  double total_cost_ = 0.0;
  std::size_t total_steps_ = 0;
};

enum class Encoding { kOneHot, kProductIndex };

struct AugmentedState {
  std::int64_t mdp_state = 0;
  StateId q = 0;
  Encoding encoding = Encoding::kProductIndex;
  std::vector<double> one_hot;      // kOneHot
  std::int64_t product_index = 0;   // kProductIndex: mdp_state * |Q| + q
};

/// Throws IndexError unless q < num_states and mdp_state >= 0.
AugmentedState augment(std::int64_t mdp_state, StateId q, Encoding encoding, std::size_t num_states);

/// ⌊log2(num_states)⌋, the width a learned embedding of the one-hot
/// recognizer state is given. Throws DomainError below 2.
unsigned embedding_dim(std::size_t num_states);

}  // namespace flc
