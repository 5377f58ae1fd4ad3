#include "flc/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flc/error.hpp"

namespace flc {

namespace {

// Streams drawn from the run seed. Layout generation uses its own stream
// inside the environment.
constexpr std::uint64_t kAgentStream = 1;

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void QLearningParams::validate() const {
  if (!in_unit(alpha)) throw ConfigError("alpha must lie in [0, 1]");
  if (!in_unit(gamma)) throw ConfigError("gamma must lie in [0, 1]");
  if (!in_unit(epsilon_start) || !in_unit(epsilon_end)) throw ConfigError("epsilon must lie in [0, 1]");
  if (!(epsilon_decay >= 0.0)) throw ConfigError("epsilon_decay must be non-negative");
}

double epsilon_at(const QLearningParams& params, std::size_t episode, std::size_t total) {
  const double horizon = params.epsilon_decay * static_cast<double>(total);
  if (horizon <= 0.0) return params.epsilon_end;
  const double frac = std::min(1.0, static_cast<double>(episode) / horizon);
  return params.epsilon_start + (params.epsilon_end - params.epsilon_start) * frac;
}

// ---------------------------------------------------------------------- QTable

QTable::QTable(std::size_t num_states, std::size_t num_actions, double alpha, double gamma)
    : num_states_(num_states), num_actions_(num_actions), alpha_(alpha), gamma_(gamma), q_(num_states * num_actions, 0.0) {
  if (num_states == 0 || num_actions == 0) throw ValidationError("Q-table needs at least one state and action");
}

std::size_t QTable::offset(std::int64_t s, ActionId a) const {
  if (s < 0 || static_cast<std::size_t>(s) >= num_states_) {
    throw IndexError("Q-table state " + std::to_string(s) + " out of range");
  }
  if (a < 0 || static_cast<std::size_t>(a) >= num_actions_) {
    throw IndexError("Q-table action " + std::to_string(a) + " out of range");
  }
  return static_cast<std::size_t>(s) * num_actions_ + static_cast<std::size_t>(a);
}

double QTable::value(std::int64_t s, ActionId a) const { return q_[offset(s, a)]; }

void QTable::set(std::int64_t s, ActionId a, double v) { q_[offset(s, a)] = v; }

std::span<const double> QTable::row(std::int64_t s) const {
  return std::span<const double>(q_).subspan(offset(s, 0), num_actions_);
}

double QTable::max_value(std::int64_t s) const {
  auto r = row(s);
  return *std::max_element(r.begin(), r.end());
}

std::vector<ActionId> QTable::ranked(std::int64_t s, Rng& rng) const {
  auto r = row(s);
  std::vector<ActionId> order(num_actions_);
  std::iota(order.begin(), order.end(), ActionId{0});
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform_int(i)]);
  std::stable_sort(order.begin(), order.end(), [&](ActionId a, ActionId b) {
    return r[static_cast<std::size_t>(a)] > r[static_cast<std::size_t>(b)];
  });
  return order;
}

void q_update(QTable& table, std::int64_t s, ActionId a, double reward, std::int64_t s_next, bool done) {
  const double bootstrap = done ? 0.0 : table.gamma() * table.max_value(s_next);
  const double old = table.value(s, a);
  table.set(s, a, old + table.alpha() * (reward + bootstrap - old));
}

void AgentConfig::validate() const {
  q.validate();
  if (dense && enforcement.kind != EnforcementKind::kShaping && enforcement.kind != EnforcementKind::kLagrangian) {
    throw ConfigError("dense = true requires shaping or lagrangian enforcement");
  }
  if (!(beta >= 0.0)) throw ConfigError("beta must be non-negative");
  if (!(enforcement.lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
  if (enforcement.kind == EnforcementKind::kLagrangian && !(enforcement.eta > 0.0)) {
    throw ConfigError("eta must be positive");
  }
  if (episodes == 0) throw ConfigError("episodes must be positive");
}

double cost_rate(std::span<const EpisodeMetrics> metrics) {
  if (metrics.empty()) throw DomainError("cost rate of an empty metrics stream");
  double cost = 0.0;
  std::size_t steps = 0;
  for (const auto& m : metrics) {
    cost += m.cost;
    steps += m.steps;
  }
  return steps == 0 ? 0.0 : cost / static_cast<double>(steps);
}

void check_compatible(const Environment& env, const ConstraintSpec& spec) {
  const bool corridor = dynamic_cast<const Corridor1D*>(&env) != nullptr;
  const bool grid = dynamic_cast<const HazardGrid2D*>(&env) != nullptr;
  const auto fail = [&](const std::string& why) {
    throw ConfigError("constraint '" + spec.name + "' (" + spec.translator.description() + ") cannot be used with " +
                      env.description() + ": " + why);
  };
  switch (spec.translator.kind()) {
    case TranslatorKind::kSign1D:
    case TranslatorKind::kMagnitudeBins:
      if (!corridor) fail("needs a 1D actuation value");
      break;
    case TranslatorKind::kDirection2D:
      if (!grid) fail("needs 2D grid moves");
      if (env.noop_action() >= 0 && !spec.translator.has_noop()) fail("the grid no-op has no symbol; use noop=false");
      break;
    case TranslatorKind::kProximityBins:
      if (!grid) fail("needs hazard distances");
      break;
    case TranslatorKind::kIdentity:
      for (ActionId a = 0; a < static_cast<ActionId>(env.num_actions()); ++a) {
        if (!spec.alphabet.contains(env.action_name(a))) fail("action '" + env.action_name(a) + "' is not a symbol");
      }
      break;
  }
}

// ----------------------------------------------------------------------- Agent

Agent::Agent(Environment& env, std::vector<std::shared_ptr<const ConstraintSpec>> constraints, AgentConfig config,
             std::uint64_t seed)
    : env_(env), specs_(std::move(constraints)), config_(config), seed_(seed), rng_(seed, kAgentStream) {
  config_.validate();
  for (const auto& spec : specs_) {
    check_compatible(env_, *spec);
    runtimes_.emplace_back(spec);
    const std::size_t n = spec->dfa->num_states();
    radix_.push_back(n);
    if (config_.augmentation == Augmentation::kProduct) product_states_ *= n;

    const Enforcement& e = config_.enforcement;
    lambdas_.push_back(e.kind == EnforcementKind::kShaping || e.kind == EnforcementKind::kLagrangian ? e.lambda : 0.0);
    limits_.push_back(e.limit >= 0.0 ? e.limit : spec->limit);
    if (config_.dense) {
      double baseline = config_.tv_baseline;
      if (!(baseline > 0.0)) {
        if (!(limits_.back() > 0.0)) {
          throw ConfigError("constraint '" + spec->name + "' has no positive limit; set tv_baseline for dense cost");
        }
        baseline = baseline_from_episode(static_cast<double>(env_.max_steps()), limits_.back());
      }
      baselines_.push_back(baseline);
      estimators_.emplace_back(spec->dfa->accepting());
      potentials_.push_back(potential_table(estimators_.back().estimates(), baseline));
    }
  }
  if (config_.enforcement.kind == EnforcementKind::kHard && specs_.empty()) {
    throw ConfigError("hard enforcement needs at least one constraint");
  }
  table_ = QTable(table_size(), env_.num_actions(), config_.q.alpha, config_.q.gamma);
}

std::size_t Agent::table_size() const { return env_.num_states() * product_states_; }

std::int64_t Agent::table_state() const {
  auto index = env_.state();
  if (config_.augmentation == Augmentation::kProduct) {
    for (std::size_t i = 0; i < runtimes_.size(); ++i) {
      index = index * static_cast<std::int64_t>(radix_[i]) + runtimes_[i].state();
    }
  }
  return index;
}

EpisodeMetrics Agent::episode(std::size_t index, Phase phase, double epsilon, bool learn) {
  const std::size_t k = runtimes_.size();
  const std::size_t layout_episode = phase == Phase::kTrain ? index : config_.episodes + index;
  env_.reset(layout_episode);
  for (auto& rt : runtimes_) rt.reset();

  EpisodeMetrics m;
  m.seed = seed_;
  m.episode = index;
  m.constraint_costs.assign(k, 0.0);
  m.constraint_violations.assign(k, 0);
  m.constraint_lambdas = lambdas_;
  m.lambda = k > 0 ? lambdas_[0] : 0.0;

  const bool filtering = config_.enforcement.kind == EnforcementKind::kHard &&
                         enforcement_schedule(config_.enforcement.hard_mode, phase);
  const TransitionPredictor predict = [this](ActionId a) { return env_.predict(a); };

  std::vector<RecognizerTrace> traces(estimators_.size());
  for (std::size_t i = 0; i < traces.size(); ++i) traces[i].states.push_back(runtimes_[i].state());

  std::int64_t s = table_state();
  while (!env_.done()) {
    std::vector<ActionId> ranking;
    if (epsilon > 0.0 && rng_.bernoulli(epsilon)) {
      ranking.resize(env_.num_actions());
      std::iota(ranking.begin(), ranking.end(), ActionId{0});
      for (std::size_t i = ranking.size(); i > 1; --i) std::swap(ranking[i - 1], ranking[rng_.uniform_int(i)]);
    } else {
      ranking = table_.ranked(s, rng_);
    }

    ActionId action = ranking.front();
    if (filtering) {
      const FilterResult f = filter_action(std::span<const RecognizerRuntime>(runtimes_), ranking, predict);
      m.masked_actions += f.masked_count;
      if (f.chosen) {
        action = *f.chosen;
      } else {
        ++m.fallbacks;
        if (env_.noop_action() >= 0) action = env_.noop_action();
      }
    }

    const EnvStep step = env_.step(action);
    double reward = step.reward;
    for (std::size_t i = 0; i < k; ++i) {
      const StateId q_prev = runtimes_[i].state();
      const RecognizerStep r = runtimes_[i].step(step.transition);
      m.constraint_costs[i] += r.cost;
      if (r.violated) ++m.constraint_violations[i];
      double signal = r.cost;
      if (config_.dense) {
        signal = dense_cost(q_prev, r.q_next, specs_[i]->costs, potentials_[i], config_.beta, config_.q.gamma);
        traces[i].states.push_back(r.q_next);
        if (r.violated) traces[i].violation_times.push_back(traces[i].states.size() - 1);
      }
      reward = shaped_reward(reward, signal, lambdas_[i]);
    }
    m.ret += step.reward;
    ++m.steps;
    if (step.terminal) m.reached_goal = true;

    const std::int64_t s_next = table_state();
    if (learn) q_update(table_, s, action, reward, s_next, step.terminal);
    s = s_next;
  }

  for (std::size_t i = 0; i < k; ++i) {
    m.cost += m.constraint_costs[i];
    m.violations += m.constraint_violations[i];
  }
  cumulative_cost_ += m.cost;
  m.cumulative_cost = cumulative_cost_;

  if (learn) {
    // Φ only moves between episodes so it is stationary within each rollout.
    for (std::size_t i = 0; i < estimators_.size(); ++i) {
      estimators_[i].update(traces[i]);
      potentials_[i] = potential_table(estimators_[i].estimates(), baselines_[i]);
    }
    if (config_.enforcement.kind == EnforcementKind::kLagrangian) {
      for (std::size_t i = 0; i < k; ++i) {
        lambdas_[i] = lagrangian_update(lambdas_[i], m.constraint_costs[i], limits_[i], config_.enforcement.eta);
      }
    }
  }
  return m;
}

RunResult Agent::run() {
  RunResult out;
  out.seed = seed_;
  cumulative_cost_ = 0.0;
  out.train.reserve(config_.episodes);
  for (std::size_t e = 0; e < config_.episodes; ++e) {
    out.train.push_back(episode(e, Phase::kTrain, epsilon_at(config_.q, e, config_.episodes), true));
  }
  cumulative_cost_ = 0.0;
  out.eval.reserve(config_.eval_episodes);
  for (std::size_t e = 0; e < config_.eval_episodes; ++e) {
    out.eval.push_back(episode(e, Phase::kEval, 0.0, false));
  }
  out.table = table_;
  out.final_lambdas = lambdas_;
  out.estimators = estimators_;
  out.baselines = baselines_;
  return out;
}

}  // namespace flc
