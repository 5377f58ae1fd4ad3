#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "flc/agents.hpp"
#include "flc/kvfile.hpp"

namespace flc {

/// Parsed `.cfg` experiment file:
///
///   env           = corridor1d(length=15, max_steps=200)
///   constraints   = [dithering-1d.flc]
///   enforcement   = none | shaping(lambda=0.01) | lagrangian(d=2, eta=0.05) | hard(mode=both)
///   augmentation  = none | product
///   dense         = false
///   beta          = 1.0
///   seeds         = [0 1 2] or 0..9
///   episodes      = 300
///   eval_episodes = 100
///   output        = results/corridor
///
/// plus optional alpha, gamma, epsilon_start, epsilon_end, epsilon_decay,
/// tv_baseline and name.
struct ExperimentConfig {
  std::string name = "experiment";
  kv::Call env;
  std::vector<std::string> constraint_paths;
  AgentConfig agent;
  std::vector<std::uint64_t> seeds{0};
  std::string output;
  /// Directory constraint paths are resolved against.
  std::filesystem::path base_dir;

  /// Canonical `enforcement = ...` value.
  std::string enforcement_text() const;
};

/// Throws ParseError (line-numbered) or ConfigError.
ExperimentConfig parse_experiment(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Loads each constraint: relative paths are tried against base_dir, then
/// as given, then as bundled names.
std::vector<std::shared_ptr<const ConstraintSpec>> load_constraints(const ExperimentConfig& config);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> constraint_names;
  std::vector<std::string> env_descriptions;
  std::vector<RunResult> runs;
};

/// Runs every seed in order. Deterministic for a given config.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct Stat {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

/// Sample mean, standard deviation (n - 1) and standard error.
Stat summarize(const std::vector<double>& values);

/// Per-seed mean evaluation violations per episode.
std::vector<double> eval_violation_means(const ExperimentResult& result);
/// Per-seed training cost rate.
std::vector<double> train_cost_rates(const ExperimentResult& result);

/// One row per episode; columns seed, episode, return, cost, violations,
/// steps, lambda, cumulative_cost, then per-constraint columns when there is
/// more than one constraint.
void write_metrics_csv(std::ostream& out, const ExperimentResult& result, Phase phase);
std::string summary_json(const ExperimentResult& result);
/// Short human-readable report, also deterministic.
std::string summary_text(const ExperimentResult& result);

/// Writes `<output>.csv`, `<output>_eval.csv` and `<output>.json`, creating
/// parent directories. Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result, const std::string& output);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

}  // namespace flc
