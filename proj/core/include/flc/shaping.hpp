#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "flc/alphabet.hpp"

namespace flc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Row-stochastic transition matrix over recognizer states.
using TransitionMatrix = std::vector<std::vector<double>>;

/// Expected number of steps to first reach any target, from every state.
/// Targets get 0; states that miss the targets with positive probability get
/// +inf. Throws DomainError for a non-square matrix or rows that do not sum to 1.
std::vector<double> exact_hitting_times(const TransitionMatrix& chain, const std::vector<bool>& targets);

/// One finished episode as seen by the recognizer: the state at every time
/// step (index 0 is the state the episode started in) and the time indices at
/// which an accepting state was entered.
struct RecognizerTrace {
  std::vector<StateId> states;
  std::vector<std::size_t> violation_times;
};

/// Running mean of steps-to-next-violation per recognizer state. Updated only
/// between episodes so the potential it induces stays fixed during a rollout.
class TvEstimator {
 public:
  TvEstimator() = default;
  explicit TvEstimator(std::vector<bool> accepting);

  std::size_t num_states() const noexcept { return accepting_.size(); }

  /// Every visit at time t with a later (or simultaneous) violation at T adds
  /// the sample T - t. Visits after the last violation are censored and only
  /// counted in censored_count().
  void update(const RecognizerTrace& episode);

  /// E[t_v(q)]: 0 for accepting states, +inf for states with no samples yet.
  double estimate(StateId q) const;
  std::vector<double> estimates() const;
  std::size_t sample_count(StateId q) const { return counts_.at(q); }
  std::size_t censored_count(StateId q) const { return censored_.at(q); }

 private:
  std::vector<bool> accepting_;
  std::vector<double> means_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> censored_;
};

/// (1/2)^(expected_tv / baseline), in [0, 1]. +inf maps to 0. Throws
/// DomainError for negative or NaN expected_tv, or a non-positive baseline.
double potential(double expected_tv, double baseline);

/// Φ for every state from a vector of expected times to violation.
std::vector<double> potential_table(const std::vector<double>& expected_tv, double baseline);

/// G'(q_prev, q_next) = G(q_next) + β (γ Φ(q_next) - Φ(q_prev)).
double dense_cost(StateId q_prev, StateId q_next, const std::vector<double>& sparse_costs,
                  const std::vector<double>& potentials, double beta, double gamma);

/// episode_length / limit. Throws DomainError unless both are positive.
double baseline_from_episode(double episode_length, double limit);

/// r - λ c.
double shaped_reward(double reward, double cost, double lambda);

/// Projected dual ascent: max(0, λ + η (J_c - d)).
double lagrangian_update(double lambda, double episode_cost, double limit, double step_size);

struct ShapingConfig {
  double beta = 1.0;
  double gamma = 0.99;
  double tv_baseline = 1.0;
  double lambda = 0.0;
  bool enabled = false;

  /// Throws DomainError if β, λ < 0, γ outside [0, 1] or baseline <= 0.
  void validate() const;
};

/// JSON object `{"<q>": {"expected_tv": x, "potential": p, "samples": n}, ...}`;
/// infinite estimates are written as null.
std::string potentials_to_json(const TvEstimator& estimator, double baseline);

}  // namespace flc
