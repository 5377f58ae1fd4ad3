#include <doctest.h>

#include <algorithm>
#include <array>
#include <set>

#include "flc/agents.hpp"
#include "flc/error.hpp"

using namespace flc;

namespace {

std::shared_ptr<const ConstraintSpec> spec(const std::string& name) {
  return std::make_shared<const ConstraintSpec>(load_spec(name));
}

std::shared_ptr<const ConstraintSpec> spec_text(const std::string& text) {
  return std::make_shared<const ConstraintSpec>(parse_spec(text));
}

// Value iteration on a corridor written out by hand: moves clamp at the
// walls, +1 on entering the goal (terminal), -0.01 otherwise.
std::vector<std::array<double, 4>> corridor_q_star(int n, int goal, double gamma) {
  std::vector<double> v(n, 0.0);
  std::vector<std::array<double, 4>> q(n);
  for (int it = 0; it < 10000; ++it) {
    for (int s = 0; s < n; ++s) {
      if (s == goal) continue;
      const std::array<int, 4> next{std::max(s - 1, 0), std::min(s + 1, n - 1), s, s};
      for (int a = 0; a < 4; ++a) {
        const int t = next[a];
        q[s][a] = t == goal ? 1.0 : -0.01 + gamma * v[t];
      }
      v[s] = *std::max_element(q[s].begin(), q[s].end());
    }
  }
  return q;
}

AgentConfig base_config(std::size_t episodes = 200) {
  AgentConfig c;
  c.episodes = episodes;
  c.eval_episodes = 10;
  return c;
}

}  // namespace

TEST_SUITE("q-learning") {
  TEST_CASE("terminal update with unit step size") {
    QTable t(2, 2, 1.0, 0.99);
    t.set(1, 0, 5.0);
    q_update(t, 0, 1, 1.0, 1, true);
    CHECK(t.value(0, 1) == 1.0);
  }
  TEST_CASE("zero step size leaves Q alone") {
    QTable t(2, 2, 0.0, 0.99);
    t.set(0, 0, 0.3);
    t.set(1, 1, 7.0);
    q_update(t, 0, 0, 1.0, 1, false);
    CHECK(t.value(0, 0) == 0.3);
  }
  TEST_CASE("bootstrapped update") {
    QTable t(2, 2, 0.5, 0.9);
    t.set(1, 1, 2.0);
    q_update(t, 0, 0, 1.0, 1, false);
    CHECK(t.value(0, 0) == doctest::Approx(0.5 * (1.0 + 0.9 * 2.0)));
  }
  TEST_CASE("two-state chain converges to its value-iteration fixed point") {
    // s0 -a0-> s0 (r=0), s0 -a1-> s1 (r=1), s1 -any-> s0 (r=0.5).
    const double g = 0.9;
    auto step = [](int s, int a) -> std::pair<int, double> {
      if (s == 1) return {0, 0.5};
      return a == 0 ? std::pair{0, 0.0} : std::pair{1, 1.0};
    };
    double v[2] = {0, 0};
    double qs[2][2];
    for (int it = 0; it < 5000; ++it) {
      for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < 2; ++a) {
          auto [n, r] = step(s, a);
          qs[s][a] = r + g * v[n];
        }
        v[s] = std::max(qs[s][0], qs[s][1]);
      }
    }
    QTable t(2, 2, 0.5, g);
    for (int sweep = 0; sweep < 5000; ++sweep) {
      for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < 2; ++a) {
          auto [n, r] = step(s, a);
          q_update(t, s, a, r, n, false);
        }
      }
    }
    for (int s = 0; s < 2; ++s) {
      for (int a = 0; a < 2; ++a) CHECK(std::abs(t.value(s, a) - qs[s][a]) < 1e-6);
    }
  }
  TEST_CASE("ranking breaks ties randomly but respects order") {
    QTable t(1, 4, 0.1, 0.9);
    t.set(0, 2, 1.0);
    Rng rng(3);
    std::set<ActionId> seconds;
    for (int i = 0; i < 200; ++i) {
      auto r = t.ranked(0, rng);
      CHECK(r.front() == 2);
      CHECK(r.size() == 4);
      seconds.insert(r[1]);
    }
    CHECK(seconds.size() == 3);
  }
  TEST_CASE("index checks") {
    QTable t(2, 3, 0.1, 0.9);
    CHECK_THROWS_AS(t.value(2, 0), IndexError);
    CHECK_THROWS_AS(t.value(0, 3), IndexError);
    CHECK_THROWS_AS(t.set(-1, 0, 1.0), IndexError);
  }
  TEST_CASE("epsilon decays linearly then holds") {
    QLearningParams p;
    CHECK(epsilon_at(p, 0, 100) == 1.0);
    CHECK(epsilon_at(p, 25, 100) == doctest::Approx(0.525));
    CHECK(epsilon_at(p, 50, 100) == doctest::Approx(0.05));
    CHECK(epsilon_at(p, 99, 100) == doctest::Approx(0.05));
    p.epsilon_decay = 0.0;
    CHECK(epsilon_at(p, 0, 100) == 0.05);
  }
  TEST_CASE("parameter validation") {
    QLearningParams p;
    p.alpha = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    AgentConfig c;
    c.dense = true;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.enforcement.kind = EnforcementKind::kShaping;
    CHECK_NOTHROW(c.validate());
    c.episodes = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }
}

TEST_SUITE("cost rate") {
  TEST_CASE("values") {
    std::vector<EpisodeMetrics> none(3);
    for (auto& m : none) m.steps = 10;
    CHECK(cost_rate(none) == 0.0);
    std::vector<EpisodeMetrics> some(10);
    for (auto& m : some) {
      m.steps = 100;
      m.cost = 1.0;
    }
    CHECK(cost_rate(some) == doctest::Approx(0.01));
    CHECK_THROWS_AS(cost_rate(std::span<const EpisodeMetrics>{}), DomainError);
  }
}

TEST_SUITE("agent") {
  TEST_CASE("unconstrained greedy policy matches value iteration on five cells") {
    Corridor1D env(5, 100);
    AgentConfig c = base_config(500);
    c.enforcement.kind = EnforcementKind::kShaping;
    Agent agent(env, {spec("dithering-1d.flc")}, c, 0);
    auto result = agent.run();
    const auto q_star = corridor_q_star(5, 4, c.q.gamma);
    for (int s = 0; s < 4; ++s) {
      auto row = result.table.row(s);
      const auto learned = std::max_element(row.begin(), row.end()) - row.begin();
      const auto optimal = std::max_element(q_star[s].begin(), q_star[s].end()) - q_star[s].begin();
      CHECK(learned == optimal);
    }
  }
  TEST_CASE("runs are reproducible") {
    auto once = [] {
      HazardGrid2D env(6, 6, 4, 60, 5, true);
      AgentConfig c = base_config(60);
      c.enforcement.kind = EnforcementKind::kLagrangian;
      c.enforcement.limit = 0.5;
      c.augmentation = Augmentation::kProduct;
      c.dense = true;
      Agent agent(env, {spec("proximity.flc")}, c, 3);
      return agent.run();
    };
    auto a = once(), b = once();
    REQUIRE(a.train.size() == b.train.size());
    for (std::size_t i = 0; i < a.train.size(); ++i) {
      CHECK(a.train[i].ret == b.train[i].ret);
      CHECK(a.train[i].cost == b.train[i].cost);
      CHECK(a.train[i].lambda == b.train[i].lambda);
    }
    CHECK(a.final_lambdas == b.final_lambdas);
  }
  TEST_CASE("product augmentation multiplies the table") {
    Corridor1D env(15, 50);
    AgentConfig c = base_config(1);
    c.augmentation = Augmentation::kProduct;
    Agent agent(env, {spec("dithering-1d.flc"), spec("overactuation-1d.flc")}, c, 0);
    CHECK(agent.table_size() == 15 * 9 * 9);
    Agent plain(env, {spec("dithering-1d.flc")}, base_config(1), 0);
    CHECK(plain.table_size() == 15);
  }
  TEST_CASE("hard shaping keeps every phase clean") {
    Corridor1D env(15, 200);
    AgentConfig c = base_config(100);
    c.enforcement.kind = EnforcementKind::kHard;
    Agent agent(env, {spec("dithering-1d.flc")}, c, 1);
    auto r = agent.run();
    for (const auto& m : r.train) CHECK(m.violations == 0);
    for (const auto& m : r.eval) CHECK(m.violations == 0);
  }
  TEST_CASE("train-only hard shaping stops masking at evaluation") {
    HazardGrid2D env(7, 7, 8, 100, 2);
    AgentConfig c = base_config(100);
    c.enforcement.kind = EnforcementKind::kHard;
    c.enforcement.hard_mode = HardMode::kTrainOnly;
    Agent agent(env, {spec("proximity.flc")}, c, 4);
    auto r = agent.run();
    std::size_t masked_eval = 0;
    for (const auto& m : r.train) CHECK(m.violations == 0);
    for (const auto& m : r.eval) masked_eval += m.masked_actions;
    CHECK(masked_eval == 0);
  }
  TEST_CASE("fallback when every action is masked") {
    Corridor1D env(5, 20);
    AgentConfig c = base_config(2);
    c.enforcement.kind = EnforcementKind::kHard;
    Agent agent(env, {spec_text("alphabet = [left right noop interact]\npattern = \".*\"\n")}, c, 0);
    auto r = agent.run();
    for (const auto& m : r.train) {
      CHECK(m.fallbacks == m.steps);
      CHECK(m.violations == m.steps);
    }
  }
  TEST_CASE("lagrangian multiplier rises above the limit") {
    Corridor1D env(15, 200);
    AgentConfig c = base_config(30);
    c.enforcement.kind = EnforcementKind::kLagrangian;
    c.enforcement.limit = 0.0;
    c.q.epsilon_end = 1.0;
    Agent agent(env, {spec("dithering-1d.flc")}, c, 0);
    auto r = agent.run();
    CHECK(r.final_lambdas.at(0) > 0.0);
    CHECK(r.train.front().lambda == 0.0);
  }
  TEST_CASE("per-episode metrics add up") {
    Corridor1D env(15, 200);
    AgentConfig c = base_config(20);
    c.q.epsilon_end = 1.0;
    Agent agent(env, {spec("dithering-1d.flc"), spec("overactuation-1d.flc")}, c, 0);
    auto r = agent.run();
    double running = 0.0;
    for (const auto& m : r.train) {
      CHECK(m.constraint_costs.size() == 2);
      CHECK(m.cost == doctest::Approx(m.constraint_costs[0] + m.constraint_costs[1]));
      CHECK(m.violations == m.constraint_violations[0] + m.constraint_violations[1]);
      running += m.cost;
      CHECK(m.cumulative_cost == doctest::Approx(running));
    }
    CHECK(r.eval.front().cumulative_cost == r.eval.front().cost);
    CHECK(r.eval.size() == 10);
  }
  TEST_CASE("translator and environment must fit") {
    HazardGrid2D grid(5, 5, 2, 20, 0);
    HazardGrid2D grid_no_noop(5, 5, 2, 20, 0, false, false);
    Corridor1D corridor(5, 20);
    CHECK_THROWS_AS(check_compatible(grid, load_spec("dithering-1d.flc")), ConfigError);
    CHECK_THROWS_AS(check_compatible(corridor, load_spec("proximity.flc")), ConfigError);
    CHECK_THROWS_AS(check_compatible(grid, load_spec("overactuation-2d.flc")), ConfigError);
    CHECK_NOTHROW(check_compatible(grid_no_noop, load_spec("overactuation-2d.flc")));
    CHECK_THROWS_AS(check_compatible(corridor, load_spec("paddle-ball.flc")), ConfigError);
    CHECK_NOTHROW(check_compatible(corridor, load_spec("actuation-sum.flc")));
    CHECK_THROWS_AS(Agent(grid, {spec("dithering-1d.flc")}, base_config(), 0), ConfigError);
    AgentConfig hard = base_config();
    hard.enforcement.kind = EnforcementKind::kHard;
    CHECK_THROWS_AS(Agent(corridor, {}, hard, 0), ConfigError);
  }
}
