#include "flc/envs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>

#include "flc/error.hpp"
#include "flc/rng.hpp"

namespace flc {

namespace {

constexpr double kStepReward = -0.01;
constexpr double kGoalReward = 1.0;

constexpr std::array<std::pair<int, int>, 9> kGridMoves = {
    {{0, -1}, {1, 0}, {-1, 0}, {0, 1}, {1, -1}, {-1, -1}, {1, 1}, {-1, 1}, {0, 0}}};
constexpr std::array<const char*, 9> kGridActionNames = {
    "up", "right", "left", "down", "upright", "upleft", "downright", "downleft", "noop"};

}  // namespace

// ---------------------------------------------------------------- Corridor1D

Corridor1D::Corridor1D(std::size_t length, std::size_t max_steps, std::int64_t start, std::int64_t goal)
    : length_(length), max_steps_(max_steps), start_(start), goal_(goal < 0 ? static_cast<std::int64_t>(length) - 1 : goal) {
  if (length_ < 2) throw ConfigError("corridor1d: length must be at least 2");
  if (max_steps_ == 0) throw ConfigError("corridor1d: max_steps must be positive");
  const auto n = static_cast<std::int64_t>(length_);
  if (start_ < 0 || start_ >= n) throw ConfigError("corridor1d: start outside the corridor");
  if (goal_ < 0 || goal_ >= n) throw ConfigError("corridor1d: goal outside the corridor");
  if (start_ == goal_) throw ConfigError("corridor1d: start and goal coincide");
  reset();
}

std::string Corridor1D::description() const {
  return "corridor1d(length=" + std::to_string(length_) + ", max_steps=" + std::to_string(max_steps_) +
         ", start=" + std::to_string(start_) + ", goal=" + std::to_string(goal_) + ")";
}

std::string Corridor1D::action_name(std::int64_t action) const {
  switch (action) {
    case kLeft: return "left";
    case kRight: return "right";
    case kNoop: return "noop";
    case kInteract: return "interact";
    default: throw IndexError("corridor1d: no action " + std::to_string(action));
  }
}

std::int64_t Corridor1D::reset(std::uint64_t) {
  position_ = start_;
  steps_ = 0;
  done_ = false;
  return position_;
}

void Corridor1D::set_position(std::int64_t position) {
  if (position < 0 || position >= static_cast<std::int64_t>(length_)) {
    throw IndexError("corridor1d: position out of range");
  }
  position_ = position;
}

std::int64_t Corridor1D::target(std::int64_t action) const {
  const auto last = static_cast<std::int64_t>(length_) - 1;
  switch (action) {
    case kLeft: return std::max<std::int64_t>(0, position_ - 1);
    case kRight: return std::min(last, position_ + 1);
    case kNoop:
    case kInteract: return position_;
    default: throw IndexError("corridor1d: no action " + std::to_string(action));
  }
}

ActionFeatures Corridor1D::action_features(std::int64_t action) const {
  ActionFeatures a;
  a.index = action;
  a.value = action == kLeft ? -1.0 : action == kRight ? 1.0 : 0.0;
  a.dx = static_cast<int>(a.value);
  a.fire = action == kInteract;
  a.token = action_name(action);
  return a;
}

StateFeatures Corridor1D::features() const { return StateFeatures{position_, 0.0, false}; }

Transition Corridor1D::predict(std::int64_t action) const {
  Transition t;
  t.prev = features();
  t.action = action_features(action);
  t.next = StateFeatures{target(action), 0.0, false};
  return t;
}

EnvStep Corridor1D::step(std::int64_t action) {
  if (done_) throw EpisodeDone();
  EnvStep out;
  out.transition = predict(action);
  position_ = out.transition.next.index;
  ++steps_;
  out.terminal = position_ == goal_;
  out.reward = out.terminal ? kGoalReward : kStepReward;
  out.done = out.terminal || steps_ >= max_steps_;
  done_ = out.done;
  return out;
}

// -------------------------------------------------------------- HazardGrid2D

HazardGrid2D::HazardGrid2D(int width, int height, int hazards, std::size_t max_steps, std::uint64_t seed,
                           bool relayout, bool noop)
    : width_(width),
      height_(height),
      hazard_count_(hazards),
      max_steps_(max_steps),
      seed_(seed),
      relayout_(relayout),
      noop_(noop) {
  if (width_ < 2 || height_ < 2) throw ConfigError("hazardgrid: width and height must be at least 2");
  if (max_steps_ == 0) throw ConfigError("hazardgrid: max_steps must be positive");
  if (hazard_count_ < 0 || hazard_count_ > width_ * height_ - 2) {
    throw ConfigError("hazardgrid: hazard count does not fit the grid");
  }
  start_ = Cell{0, height_ - 1};
  goal_ = Cell{width_ - 1, 0};
  generate_layout(0);
  reset(0);
}

HazardGrid2D::HazardGrid2D(int width, int height, std::vector<Cell> hazards, std::size_t max_steps, bool noop)
    : width_(width),
      height_(height),
      hazard_count_(static_cast<int>(hazards.size())),
      max_steps_(max_steps),
      noop_(noop),
      fixed_layout_(true),
      hazards_(std::move(hazards)) {
  if (width_ < 2 || height_ < 2) throw ConfigError("hazardgrid: width and height must be at least 2");
  if (max_steps_ == 0) throw ConfigError("hazardgrid: max_steps must be positive");
  start_ = Cell{0, height_ - 1};
  goal_ = Cell{width_ - 1, 0};
  hazard_mask_.assign(static_cast<std::size_t>(width_ * height_), 0);
  for (const Cell& c : hazards_) {
    if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_) throw ConfigError("hazardgrid: hazard off grid");
    hazard_mask_[static_cast<std::size_t>(index(c))] = 1;
  }
  reset(0);
}

std::string HazardGrid2D::description() const {
  return "hazardgrid(w=" + std::to_string(width_) + ", h=" + std::to_string(height_) +
         ", hazards=" + std::to_string(hazard_count_) + ", max_steps=" + std::to_string(max_steps_) +
         ", seed=" + std::to_string(seed_) + ", relayout=" + (relayout_ ? "true" : "false") +
         ", noop=" + (noop_ ? "true" : "false") + ")";
}

std::string HazardGrid2D::action_name(std::int64_t action) const {
  if (action < 0 || action >= static_cast<std::int64_t>(num_actions())) {
    throw IndexError("hazardgrid: no action " + std::to_string(action));
  }
  return kGridActionNames[static_cast<std::size_t>(action)];
}

void HazardGrid2D::generate_layout(std::uint64_t episode) {
  const auto cells = static_cast<std::uint64_t>(width_ * height_);
  layout_seed_ = relayout_ ? Rng::splitmix64(seed_ ^ Rng::splitmix64(episode + 1)) : seed_;
  Rng rng(layout_seed_, /*stream=*/0x1a7);
  while (true) {
    hazards_.clear();
    hazard_mask_.assign(cells, 0);
    while (static_cast<int>(hazards_.size()) < hazard_count_) {
      auto k = static_cast<std::int64_t>(rng.uniform_int(cells));
      Cell c{static_cast<int>(k % width_), static_cast<int>(k / width_)};
      if (c == start_ || c == goal_ || hazard_mask_[static_cast<std::size_t>(k)]) continue;
      hazard_mask_[static_cast<std::size_t>(k)] = 1;
      hazards_.push_back(c);
    }
    if (solvable()) return;
  }
}

bool HazardGrid2D::is_hazard(Cell c) const {
  if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_) return false;
  return hazard_mask_[static_cast<std::size_t>(index(c))] != 0;
}

bool HazardGrid2D::solvable() const {
  std::vector<char> seen(static_cast<std::size_t>(width_ * height_), 0);
  std::deque<Cell> queue{start_};
  seen[static_cast<std::size_t>(index(start_))] = 1;
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    if (c == goal_) return true;
    for (std::size_t m = 0; m < 8; ++m) {
      Cell n{c.x + kGridMoves[m].first, c.y + kGridMoves[m].second};
      if (n.x < 0 || n.y < 0 || n.x >= width_ || n.y >= height_) continue;
      auto k = static_cast<std::size_t>(index(n));
      if (seen[k] || hazard_mask_[k]) continue;
      seen[k] = 1;
      queue.push_back(n);
    }
  }
  return false;
}

double HazardGrid2D::hazard_distance(Cell c) const {
  if (hazards_.empty()) return 0.0;
  int best = std::numeric_limits<int>::max();
  for (const Cell& h : hazards_) best = std::min(best, std::max(std::abs(h.x - c.x), std::abs(h.y - c.y)));
  const double diameter = static_cast<double>(std::max(width_, height_) - 1);
  return std::clamp(1.0 - static_cast<double>(best) / diameter, 0.0, 1.0);
}

StateFeatures HazardGrid2D::features_at(Cell c) const {
  return StateFeatures{index(c), hazard_distance(c), is_hazard(c)};
}

std::int64_t HazardGrid2D::reset(std::uint64_t episode) {
  if (relayout_ && !fixed_layout_) generate_layout(episode);
  position_ = start_;
  steps_ = 0;
  done_ = false;
  return state();
}

void HazardGrid2D::set_position(Cell c) {
  if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_) throw IndexError("hazardgrid: cell off grid");
  position_ = c;
}

Cell HazardGrid2D::target(std::int64_t action) const {
  if (action < 0 || action >= static_cast<std::int64_t>(num_actions())) {
    throw IndexError("hazardgrid: no action " + std::to_string(action));
  }
  const auto [dx, dy] = kGridMoves[static_cast<std::size_t>(action)];
  Cell n{position_.x + dx, position_.y + dy};
  if (n.x < 0 || n.y < 0 || n.x >= width_ || n.y >= height_) return position_;
  return n;
}

Transition HazardGrid2D::predict(std::int64_t action) const {
  Transition t;
  t.prev = features_at(position_);
  t.next = features_at(target(action));
  t.action.index = action;
  t.action.dx = kGridMoves[static_cast<std::size_t>(action)].first;
  t.action.dy = kGridMoves[static_cast<std::size_t>(action)].second;
  t.action.token = kGridActionNames[static_cast<std::size_t>(action)];
  return t;
}

EnvStep HazardGrid2D::step(std::int64_t action) {
  if (done_) throw EpisodeDone();
  EnvStep out;
  out.transition = predict(action);
  position_ = target(action);
  ++steps_;
  out.terminal = position_ == goal_;
  out.reward = out.terminal ? kGoalReward : kStepReward;
  out.done = out.terminal || steps_ >= max_steps_;
  done_ = out.done;
  return out;
}

std::unique_ptr<Environment> make_environment(const kv::Call& call, std::uint64_t run_seed) {
  const std::size_t line = call.line;
  if (call.name == "corridor1d") {
    call.expect_only({"length", "max_steps", "start", "goal"}, line);
    long long length = call.get_int("length", 15);
    long long max_steps = call.get_int("max_steps", 200);
    if (length < 2 || max_steps < 1) throw ConfigError("corridor1d: length >= 2 and max_steps >= 1 required");
    return std::make_unique<Corridor1D>(static_cast<std::size_t>(length), static_cast<std::size_t>(max_steps),
                                        call.get_int("start", 0), call.get_int("goal", -1));
  }
  if (call.name == "hazardgrid") {
    call.expect_only({"w", "h", "hazards", "max_steps", "seed", "relayout", "noop"}, line);
    long long w = call.get_int("w", 9);
    long long h = call.get_int("h", 9);
    long long hazards = call.get_int("hazards", 6);
    long long max_steps = call.get_int("max_steps", 300);
    if (max_steps < 1) throw ConfigError("hazardgrid: max_steps must be positive");
    auto seed = call.find("seed") ? static_cast<std::uint64_t>(call.get_int("seed", 0)) : run_seed;
    bool relayout = call.find("relayout") ? kv::to_bool(*call.find("relayout"), line) : false;
    bool noop = call.find("noop") ? kv::to_bool(*call.find("noop"), line) : true;
    return std::make_unique<HazardGrid2D>(static_cast<int>(w), static_cast<int>(h), static_cast<int>(hazards),
                                          static_cast<std::size_t>(max_steps), seed, relayout, noop);
  }
  throw ConfigError("unknown environment '" + call.name + "'");
}

}  // namespace flc
