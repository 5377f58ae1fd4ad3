#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "flc/kvfile.hpp"
#include "flc/translator.hpp"

namespace flc {

struct EnvStep {
  Transition transition;
  double reward = 0.0;
  /// Episode over (goal reached or step cap hit).
  bool done = false;
  /// Goal reached; the value of the next state is zero.
  bool terminal = false;
};

/// Deterministic episodic environment with integer states and actions.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string description() const = 0;
  virtual std::size_t num_states() const = 0;
  virtual std::size_t num_actions() const = 0;
  virtual std::string action_name(std::int64_t action) const = 0;
  /// Action registered as the fallback when every action is masked; -1 when
  /// the environment has no no-op.
  virtual std::int64_t noop_action() const = 0;
  virtual std::size_t max_steps() const = 0;

  /// Start a new episode; `episode` selects the layout when the environment
  /// re-arranges itself per episode. Returns the initial state index.
  virtual std::int64_t reset(std::uint64_t episode) = 0;
  virtual std::int64_t state() const = 0;
  virtual bool done() const = 0;
  virtual std::size_t steps() const = 0;

  /// Throws EpisodeDone after termination, IndexError for a bad action.
  virtual EnvStep step(std::int64_t action) = 0;
  /// The transition `step(action)` would produce, without side effects.
  virtual Transition predict(std::int64_t action) const = 0;
  virtual StateFeatures features() const = 0;
};

/// Cells 0..length-1; actions left, right, noop, interact. +1 on reaching
/// the goal, -0.01 for every other step.
class Corridor1D final : public Environment {
 public:
  enum Action : std::int64_t { kLeft = 0, kRight = 1, kNoop = 2, kInteract = 3 };

  /// goal < 0 means the last cell. Throws ConfigError for invalid geometry.
  Corridor1D(std::size_t length, std::size_t max_steps, std::int64_t start = 0, std::int64_t goal = -1);

  std::string description() const override;
  std::size_t num_states() const override { return length_; }
  std::size_t num_actions() const override { return 4; }
  std::string action_name(std::int64_t action) const override;
  std::int64_t noop_action() const override { return kNoop; }
  std::size_t max_steps() const override { return max_steps_; }

  std::int64_t reset(std::uint64_t episode = 0) override;
  std::int64_t state() const override { return position_; }
  bool done() const override { return done_; }
  std::size_t steps() const override { return steps_; }
  EnvStep step(std::int64_t action) override;
  Transition predict(std::int64_t action) const override;
  StateFeatures features() const override;

  /// Test hook: move the agent without consuming a step.
  void set_position(std::int64_t position);
  std::int64_t goal() const noexcept { return goal_; }
  std::size_t length() const noexcept { return length_; }

 private:
  ActionFeatures action_features(std::int64_t action) const;
  std::int64_t target(std::int64_t action) const;

  std::size_t length_;
  std::size_t max_steps_;
  std::int64_t start_;
  std::int64_t goal_;
  std::int64_t position_ = 0;
  std::size_t steps_ = 0;
  bool done_ = false;
};

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

/// 8-connected grid with hazard cells. The agent starts bottom-left, the goal
/// is top-right. Hazards are placed from the seed (and the episode index
/// when `relayout` is set), rejection-sampled until a hazard-free path from
/// start to goal exists. Actions 0..7 are the moves up, right, left, down,
/// up-right, up-left, down-right, down-left (y grows downward); 8 is no-op
/// unless the grid is built without one.
class HazardGrid2D final : public Environment {
 public:
  static constexpr std::int64_t kNoop = 8;

  HazardGrid2D(int width, int height, int hazards, std::size_t max_steps, std::uint64_t seed,
               bool relayout = false, bool noop = true);
  /// Fixed layout, for tests.
  HazardGrid2D(int width, int height, std::vector<Cell> hazards, std::size_t max_steps, bool noop = true);

  std::string description() const override;
  std::size_t num_states() const override { return static_cast<std::size_t>(width_ * height_); }
  std::size_t num_actions() const override { return noop_ ? 9 : 8; }
  std::string action_name(std::int64_t action) const override;
  std::int64_t noop_action() const override { return noop_ ? kNoop : -1; }
  std::size_t max_steps() const override { return max_steps_; }

  std::int64_t reset(std::uint64_t episode = 0) override;
  std::int64_t state() const override { return index(position_); }
  bool done() const override { return done_; }
  std::size_t steps() const override { return steps_; }
  EnvStep step(std::int64_t action) override;
  Transition predict(std::int64_t action) const override;
  StateFeatures features() const override { return features_at(position_); }

  /// 1 - (Chebyshev distance to the nearest hazard) / (grid diameter),
  /// clamped to [0, 1]; 1 on a hazard, 0 with no hazards.
  double hazard_distance(Cell cell) const;
  bool is_hazard(Cell cell) const;
  /// Whether a hazard-free 8-connected path joins start and goal.
  bool solvable() const;

  const std::vector<Cell>& hazards() const noexcept { return hazards_; }
  Cell position() const noexcept { return position_; }
  Cell start() const noexcept { return start_; }
  Cell goal() const noexcept { return goal_; }
  void set_position(Cell cell);
  std::uint64_t layout_seed() const noexcept { return layout_seed_; }

 private:
  std::int64_t index(Cell c) const { return static_cast<std::int64_t>(c.y) * width_ + c.x; }
  Cell target(std::int64_t action) const;
  StateFeatures features_at(Cell c) const;
  void generate_layout(std::uint64_t episode);

  int width_;
  int height_;
  int hazard_count_;
  std::size_t max_steps_;
  std::uint64_t seed_ = 0;
  bool relayout_ = false;
  bool noop_ = true;
  bool fixed_layout_ = false;
  std::uint64_t layout_seed_ = 0;
  std::vector<Cell> hazards_;
  std::vector<char> hazard_mask_;
  Cell start_;
  Cell goal_;
  Cell position_;
  std::size_t steps_ = 0;
  bool done_ = false;
};

/// `corridor1d(length=15, max_steps=200)` or
/// `hazardgrid(w=9, h=9, hazards=6, max_steps=300, seed=1, relayout=true, noop=true)`.
/// `seed` defaults to `run_seed` when absent. Throws ParseError/ConfigError.
std::unique_ptr<Environment> make_environment(const kv::Call& call, std::uint64_t run_seed);

}  // namespace flc
