#include "flc/shaping.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>

#include "flc/error.hpp"
#include "json.hpp"

namespace flc {

std::vector<double> exact_hitting_times(const TransitionMatrix& chain, const std::vector<bool>& targets) {
  const std::size_t n = chain.size();
  if (targets.size() != n) throw DomainError("targets must have one entry per state");
  for (const auto& row : chain) {
    if (row.size() != n) throw DomainError("transition matrix must be square");
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw DomainError("transition probabilities must be non-negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError("transition matrix rows must sum to 1");
  }

  // Non-target states that can reach a target.
  std::vector<bool> reaches(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (targets[i]) {
      reaches[i] = true;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    std::size_t j = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < n; ++i) {
      if (!reaches[i] && !targets[i] && chain[i][j] > 0.0) {
        reaches[i] = true;
        queue.push_back(i);
      }
    }
  }
  // Anything that can wander (through non-targets) into a state that never
  // hits has an infinite expectation.
  std::vector<bool> infinite(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!reaches[i]) {
      infinite[i] = true;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    std::size_t j = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < n; ++i) {
      if (!infinite[i] && !targets[i] && chain[i][j] > 0.0) {
        infinite[i] = true;
        queue.push_back(i);
      }
    }
  }

  std::vector<std::size_t> unknowns;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!targets[i] && !infinite[i]) {
      slot[i] = static_cast<long>(unknowns.size());
      unknowns.push_back(i);
    }
  }

  std::vector<double> result(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (infinite[i]) result[i] = kInfinity;
  }
  if (unknowns.empty()) return result;

  // (I - P_NN) E = 1 over the finite, non-target states.
  const auto m = static_cast<Eigen::Index>(unknowns.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto& row = chain[unknowns[static_cast<std::size_t>(r)]];
    for (std::size_t j = 0; j < n; ++j) {
      if (slot[j] >= 0) a(r, slot[j]) -= row[j];
    }
  }
  Eigen::VectorXd e = a.partialPivLu().solve(b);
  for (Eigen::Index r = 0; r < m; ++r) result[unknowns[static_cast<std::size_t>(r)]] = e(r);
  return result;
}

TvEstimator::TvEstimator(std::vector<bool> accepting)
    : accepting_(std::move(accepting)),
      means_(accepting_.size(), 0.0),
      counts_(accepting_.size(), 0),
      censored_(accepting_.size(), 0) {}

void TvEstimator::update(const RecognizerTrace& episode) {
  std::vector<std::size_t> violations = episode.violation_times;
  std::sort(violations.begin(), violations.end());
  std::size_t next = 0;
  for (std::size_t t = 0; t < episode.states.size(); ++t) {
    const StateId q = episode.states[t];
    if (q >= num_states()) throw IndexError("recognizer state out of range in trace");
    while (next < violations.size() && violations[next] < t) ++next;
    if (next == violations.size()) {
      ++censored_[q];
      continue;
    }
    const auto sample = static_cast<double>(violations[next] - t);
    ++counts_[q];
    means_[q] += (sample - means_[q]) / static_cast<double>(counts_[q]);
  }
}

double TvEstimator::estimate(StateId q) const {
  if (accepting_.at(q)) return 0.0;
  return counts_[q] == 0 ? kInfinity : means_[q];
}

std::vector<double> TvEstimator::estimates() const {
  std::vector<double> out(num_states());
  for (StateId q = 0; q < num_states(); ++q) out[q] = estimate(q);
  return out;
}

double potential(double expected_tv, double baseline) {
  if (!(baseline > 0.0)) throw DomainError("potential baseline must be positive");
  if (std::isnan(expected_tv) || expected_tv < 0.0) {
    throw DomainError("expected time to violation must be non-negative");
  }
  if (std::isinf(expected_tv)) return 0.0;
  return std::pow(0.5, expected_tv / baseline);
}

std::vector<double> potential_table(const std::vector<double>& expected_tv, double baseline) {
  std::vector<double> out;
  out.reserve(expected_tv.size());
  for (double e : expected_tv) out.push_back(potential(e, baseline));
  return out;
}

double dense_cost(StateId q_prev, StateId q_next, const std::vector<double>& sparse_costs,
                  const std::vector<double>& potentials, double beta, double gamma) {
  return sparse_costs.at(q_next) + beta * (gamma * potentials.at(q_next) - potentials.at(q_prev));
}

double baseline_from_episode(double episode_length, double limit) {
  if (!(limit > 0.0)) throw DomainError("a positive cost limit is needed to derive the baseline");
  if (!(episode_length > 0.0)) throw DomainError("episode length must be positive");
  return episode_length / limit;
}

double shaped_reward(double reward, double cost, double lambda) { return reward - lambda * cost; }

double lagrangian_update(double lambda, double episode_cost, double limit, double step_size) {
  return std::max(0.0, lambda + step_size * (episode_cost - limit));
}

void ShapingConfig::validate() const {
  if (beta < 0.0) throw DomainError("beta must be non-negative");
  if (lambda < 0.0) throw DomainError("lambda must be non-negative");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
  if (!(tv_baseline > 0.0)) throw DomainError("t_v baseline must be positive");
}

std::string potentials_to_json(const TvEstimator& estimator, double baseline) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (StateId q = 0; q < estimator.num_states(); ++q) {
    nlohmann::ordered_json entry;
    double e = estimator.estimate(q);
    entry["expected_tv"] = std::isinf(e) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(e);
    entry["potential"] = potential(e, baseline);
    entry["samples"] = estimator.sample_count(q);
    j[std::to_string(q)] = std::move(entry);
  }
  return j.dump(2);
}

}  // namespace flc
