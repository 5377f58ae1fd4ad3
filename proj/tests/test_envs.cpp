#include <doctest.h>

#include <set>

#include "flc/envs.hpp"
#include "flc/error.hpp"
#include "flc/kvfile.hpp"

using namespace flc;

TEST_SUITE("corridor") {
  TEST_CASE("one step right") {
    Corridor1D env(10, 50, 3);
    CHECK(env.reset() == 3);
    auto s = env.step(Corridor1D::kRight);
    CHECK(env.state() == 4);
    CHECK(s.reward == doctest::Approx(-0.01));
    CHECK_FALSE(s.done);
    CHECK(s.transition.prev.index == 3);
    CHECK(s.transition.next.index == 4);
    CHECK(s.transition.action.value == 1.0);
  }
  TEST_CASE("reaching the goal") {
    Corridor1D env(10, 50, 0);
    env.set_position(8);
    auto s = env.step(Corridor1D::kRight);
    CHECK(s.reward == 1.0);
    CHECK(s.done);
    CHECK(s.terminal);
    CHECK(env.done());
    CHECK_THROWS_AS(env.step(Corridor1D::kLeft), EpisodeDone);
  }
  TEST_CASE("walls, no-op and interact") {
    Corridor1D env(5, 50);
    env.reset();
    CHECK(env.step(Corridor1D::kLeft).transition.next.index == 0);
    auto n = env.step(Corridor1D::kNoop);
    CHECK(n.transition.action.value == 0.0);
    CHECK_FALSE(n.transition.action.fire);
    auto i = env.step(Corridor1D::kInteract);
    CHECK(i.transition.action.fire);
    CHECK(env.state() == 0);
    CHECK_THROWS_AS(env.step(7), IndexError);
    CHECK(env.noop_action() == Corridor1D::kNoop);
    CHECK(env.action_name(Corridor1D::kInteract) == "interact");
  }
  TEST_CASE("step cap truncates without terminating") {
    Corridor1D env(5, 3);
    env.reset();
    env.step(Corridor1D::kNoop);
    env.step(Corridor1D::kNoop);
    auto s = env.step(Corridor1D::kNoop);
    CHECK(s.done);
    CHECK_FALSE(s.terminal);
    CHECK(env.steps() == 3);
    env.reset();
    CHECK_FALSE(env.done());
    CHECK(env.steps() == 0);
  }
  TEST_CASE("predict matches step") {
    Corridor1D env(6, 50, 2);
    for (std::int64_t a = 0; a < 4; ++a) {
      env.reset();
      Transition p = env.predict(a);
      auto s = env.step(a);
      CHECK(p.next.index == s.transition.next.index);
      CHECK(p.action.value == s.transition.action.value);
      CHECK(p.action.fire == s.transition.action.fire);
    }
  }
  TEST_CASE("bad geometry") {
    CHECK_THROWS_AS(Corridor1D(1, 10), ConfigError);
    CHECK_THROWS_AS(Corridor1D(5, 0), ConfigError);
    CHECK_THROWS_AS(Corridor1D(5, 10, 7), ConfigError);
    CHECK_THROWS_AS(Corridor1D(5, 10, 4), ConfigError);
  }
}

TEST_SUITE("hazardgrid") {
  TEST_CASE("distance normalization") {
    HazardGrid2D g(5, 5, std::vector<Cell>{{0, 0}}, 100);
    CHECK(g.hazard_distance({0, 0}) == 1.0);
    CHECK(g.hazard_distance({4, 4}) == 0.0);
    CHECK(g.hazard_distance({2, 2}) == 0.5);
    CHECK(g.hazard_distance({1, 3}) == 0.25);
    HazardGrid2D empty(5, 5, std::vector<Cell>{}, 100);
    CHECK(empty.hazard_distance({2, 2}) == 0.0);
  }
  TEST_CASE("stepping onto a hazard") {
    HazardGrid2D g(5, 5, std::vector<Cell>{{1, 3}}, 100);
    g.reset();
    CHECK(g.position() == Cell{0, 4});
    auto s = g.step(4);  // up-right
    CHECK(s.transition.next.contact);
    CHECK(s.transition.next.hazard_distance == 1.0);
    CHECK(s.transition.action.dx == 1);
    CHECK(s.transition.action.dy == -1);
    CHECK_FALSE(s.done);
    CHECK(s.reward == doctest::Approx(-0.01));
  }
  TEST_CASE("goal and walls") {
    HazardGrid2D g(4, 4, std::vector<Cell>{}, 100);
    g.reset();
    auto w = g.step(2);  // left into the wall
    CHECK(g.position() == Cell{0, 3});
    // The commanded move is reported even when the wall blocks it.
    CHECK(w.transition.action.dx == -1);
    CHECK(w.transition.next.index == w.transition.prev.index);
    g.set_position({2, 1});
    auto s = g.step(4);
    CHECK(s.terminal);
    CHECK(s.reward == 1.0);
    CHECK_THROWS_AS(g.step(0), EpisodeDone);
    CHECK_THROWS_AS(g.set_position({9, 9}), IndexError);
  }
  TEST_CASE("generated layouts are solvable and deterministic") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      HazardGrid2D a(9, 9, 20, 300, seed);
      HazardGrid2D b(9, 9, 20, 300, seed);
      CHECK(a.hazards() == b.hazards());
      CHECK(a.hazards().size() == 20);
      CHECK(a.solvable());
      std::set<std::pair<int, int>> cells;
      for (const Cell& c : a.hazards()) {
        CHECK_FALSE(c == a.start());
        CHECK_FALSE(c == a.goal());
        cells.insert({c.x, c.y});
      }
      CHECK(cells.size() == 20);
    }
  }
  TEST_CASE("relayout changes hazards between episodes only when asked") {
    HazardGrid2D fixed(9, 9, 6, 300, 4);
    const auto first = fixed.hazards();
    fixed.reset(5);
    CHECK(fixed.hazards() == first);
    HazardGrid2D moving(9, 9, 6, 300, 4, true);
    moving.reset(0);
    const auto ep0 = moving.hazards();
    moving.reset(1);
    CHECK_FALSE(moving.hazards() == ep0);
    moving.reset(0);
    CHECK(moving.hazards() == ep0);
  }
  TEST_CASE("no-op is optional") {
    HazardGrid2D with(5, 5, std::vector<Cell>{}, 10);
    HazardGrid2D without(5, 5, std::vector<Cell>{}, 10, false);
    CHECK(with.num_actions() == 9);
    CHECK(with.noop_action() == 8);
    CHECK(without.num_actions() == 8);
    CHECK(without.noop_action() == -1);
    without.reset();
    CHECK_THROWS_AS(without.step(8), IndexError);
  }
  TEST_CASE("predict has no side effects") {
    HazardGrid2D g(6, 6, 4, 100, 3);
    g.reset();
    for (std::int64_t a = 0; a < 9; ++a) {
      auto p = g.predict(a);
      CHECK(g.steps() == 0);
      CHECK(g.position() == g.start());
      (void)p;
    }
  }
  TEST_CASE("too many hazards") {
    CHECK_THROWS_AS(HazardGrid2D(3, 3, 8, 10, 0), ConfigError);
  }
}

TEST_SUITE("factory") {
  TEST_CASE("calls") {
    auto c = make_environment(kv::parse_call("corridor1d(length=7, max_steps=20)", 1), 0);
    CHECK(c->num_states() == 7);
    CHECK(c->max_steps() == 20);
    auto g = make_environment(kv::parse_call("hazardgrid(w=6, h=5, hazards=3)", 1), 11);
    CHECK(g->num_states() == 30);
    CHECK(g->description().find("seed=11") != std::string::npos);
    auto pinned = make_environment(kv::parse_call("hazardgrid(seed=2)", 1), 11);
    CHECK(pinned->description().find("seed=2") != std::string::npos);
    CHECK_THROWS_AS(make_environment(kv::parse_call("maze", 1), 0), ConfigError);
    CHECK_THROWS_AS(make_environment(kv::parse_call("corridor1d(width=3)", 1), 0), ParseError);
  }
}
