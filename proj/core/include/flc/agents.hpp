#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "flc/actionshape.hpp"
#include "flc/constraint.hpp"
#include "flc/envs.hpp"
#include "flc/rng.hpp"
#include "flc/shaping.hpp"

namespace flc {

struct QLearningParams {
  double alpha = 0.1;
  double gamma = 0.99;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  /// Fraction of training episodes over which ε decays linearly.
  double epsilon_decay = 0.5;

  /// Throws ConfigError for α, γ, ε outside [0, 1] or a negative decay.
  void validate() const;
};

/// ε for `episode` (0-based) out of `total` training episodes.
double epsilon_at(const QLearningParams& params, std::size_t episode, std::size_t total);

/// Dense Q(s, a) table, zero-initialised.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t num_states, std::size_t num_actions, double alpha, double gamma);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  double alpha() const noexcept { return alpha_; }
  double gamma() const noexcept { return gamma_; }

  /// Throws IndexError for out-of-range indices.
  double value(std::int64_t s, ActionId a) const;
  void set(std::int64_t s, ActionId a, double v);
  double max_value(std::int64_t s) const;
  std::span<const double> row(std::int64_t s) const;

  /// All actions best first; equal values are ordered randomly.
  std::vector<ActionId> ranked(std::int64_t s, Rng& rng) const;

 private:
  std::size_t offset(std::int64_t s, ActionId a) const;

  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  double alpha_ = 0.1;
  double gamma_ = 0.99;
  std::vector<double> q_;
};

/// Q(s,a) += α [r + γ max Q(s',·) (1 - done) - Q(s,a)].
void q_update(QTable& table, std::int64_t s, ActionId a, double reward, std::int64_t s_next, bool done);

enum class EnforcementKind { kNone, kShaping, kLagrangian, kHard };

struct Enforcement {
  EnforcementKind kind = EnforcementKind::kNone;
  /// Fixed penalty (shaping) or initial multiplier (lagrangian).
  double lambda = 0.0;
  /// Per-episode cost limit d; lagrangian only. Negative means "use each
  /// constraint's own limit".
  double limit = -1.0;
  double eta = 0.05;
  HardMode hard_mode = HardMode::kTrainAndEval;
};

enum class Augmentation { kNone, kProduct };

struct AgentConfig {
  Enforcement enforcement;
  Augmentation augmentation = Augmentation::kNone;
  /// Use G' in place of the sparse cost in the optimisation signal.
  bool dense = false;
  double beta = 1.0;
  /// Φ baseline; non-positive means max_steps / limit of each constraint.
  double tv_baseline = 0.0;
  std::size_t episodes = 500;
  std::size_t eval_episodes = 100;
  QLearningParams q;

  /// Throws ConfigError for inconsistent settings.
  void validate() const;
};

struct EpisodeMetrics {
  std::uint64_t seed = 0;
  std::size_t episode = 0;
  double ret = 0.0;
  /// Sparse cost summed over constraints.
  double cost = 0.0;
  std::size_t violations = 0;
  std::size_t steps = 0;
  /// Multiplier of the first constraint during the episode.
  double lambda = 0.0;
  /// Sparse cost accumulated since the start of the phase, this episode included.
  double cumulative_cost = 0.0;
  bool reached_goal = false;
  std::size_t masked_actions = 0;
  /// Steps where every action was masked and the no-op fallback was taken.
  std::size_t fallbacks = 0;
  std::vector<double> constraint_costs;
  std::vector<std::size_t> constraint_violations;
  std::vector<double> constraint_lambdas;
};

/// Total sparse cost over total steps. Throws DomainError for an empty stream.
double cost_rate(std::span<const EpisodeMetrics> metrics);

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<EpisodeMetrics> train;
  std::vector<EpisodeMetrics> eval;
  QTable table;
  std::vector<double> final_lambdas;
  std::vector<TvEstimator> estimators;
  std::vector<double> baselines;
};

/// Q-learning agent for one environment and a set of constraints.
class Agent {
 public:
  /// Throws ConfigError when a translator cannot read this environment's
  /// transitions or the configuration is inconsistent.
  Agent(Environment& env, std::vector<std::shared_ptr<const ConstraintSpec>> constraints, AgentConfig config,
        std::uint64_t seed);

  /// Training followed by greedy evaluation.
  RunResult run();

  /// Index into the Q-table for the current environment and recognizer states.
  std::int64_t table_state() const;
  std::size_t table_size() const;

 private:
  EpisodeMetrics episode(std::size_t index, Phase phase, double epsilon, bool learn);

  Environment& env_;
  std::vector<std::shared_ptr<const ConstraintSpec>> specs_;
  AgentConfig config_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<RecognizerRuntime> runtimes_;
  std::vector<std::size_t> radix_;
  std::size_t product_states_ = 1;
  QTable table_;
  std::vector<double> lambdas_;
  std::vector<double> limits_;
  std::vector<double> baselines_;
  std::vector<TvEstimator> estimators_;
  std::vector<std::vector<double>> potentials_;
  double cumulative_cost_ = 0.0;
};

/// Throws ConfigError unless `spec`'s translator can read `env`'s transitions.
void check_compatible(const Environment& env, const ConstraintSpec& spec);

}  // namespace flc
