#include "flc/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "flc/error.hpp"
#include "json.hpp"

namespace flc {

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text, std::size_t line) {
  std::vector<std::uint64_t> seeds;
  if (auto dots = text.find(".."); dots != std::string::npos && text.front() != '[') {
    const long long lo = kv::to_int(kv::trim(text.substr(0, dots)), line);
    const long long hi = kv::to_int(kv::trim(text.substr(dots + 2)), line);
    if (lo < 0 || hi < lo) throw ParseError(line, "seed range must be a..b with 0 <= a <= b");
    for (long long s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
    return seeds;
  }
  for (const auto& item : kv::parse_list(text)) {
    const long long s = kv::to_int(item, line);
    if (s < 0) throw ParseError(line, "seeds must be non-negative");
    seeds.push_back(static_cast<std::uint64_t>(s));
  }
  if (seeds.empty()) throw ParseError(line, "seeds list is empty");
  return seeds;
}

Enforcement parse_enforcement(const kv::Call& call) {
  Enforcement e;
  if (call.name == "none") {
    call.expect_only({}, call.line);
    e.kind = EnforcementKind::kNone;
  } else if (call.name == "shaping") {
    call.expect_only({"lambda"}, call.line);
    if (!call.find("lambda")) throw ParseError(call.line, "shaping(...) needs lambda");
    e.kind = EnforcementKind::kShaping;
    e.lambda = call.get_double("lambda", 0.0);
  } else if (call.name == "lagrangian") {
    call.expect_only({"d", "eta", "lambda"}, call.line);
    e.kind = EnforcementKind::kLagrangian;
    e.limit = call.get_double("d", -1.0);
    e.eta = call.get_double("eta", 0.05);
    e.lambda = call.get_double("lambda", 0.0);
  } else if (call.name == "hard") {
    call.expect_only({"mode"}, call.line);
    e.kind = EnforcementKind::kHard;
    e.hard_mode = parse_hard_mode(call.get("mode", "both"));
  } else {
    throw ParseError(call.line, "unknown enforcement '" + call.name + "'");
  }
  return e;
}

std::filesystem::path resolve(const ExperimentConfig& config, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_relative() && !config.base_dir.empty() && std::filesystem::exists(config.base_dir / p)) {
    return config.base_dir / p;
  }
  return p;
}

double mean_of(const std::vector<EpisodeMetrics>& rows, auto projection) {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : rows) sum += static_cast<double>(projection(r));
  return sum / static_cast<double>(rows.size());
}

nlohmann::ordered_json stat_json(const Stat& s) {
  return nlohmann::ordered_json{{"mean", s.mean}, {"sd", s.sd}, {"se", s.se}, {"n", s.n}};
}

nlohmann::ordered_json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string ExperimentConfig::enforcement_text() const {
  const Enforcement& e = agent.enforcement;
  switch (e.kind) {
    case EnforcementKind::kNone: return "none";
    case EnforcementKind::kShaping: return "shaping(lambda=" + format_number(e.lambda) + ")";
    case EnforcementKind::kLagrangian:
      return "lagrangian(d=" + (e.limit >= 0.0 ? format_number(e.limit) : std::string("spec")) +
             ", eta=" + format_number(e.eta) + ", lambda=" + format_number(e.lambda) + ")";
    case EnforcementKind::kHard: return std::string("hard(mode=") + to_string(e.hard_mode) + ")";
  }
  return "none";
}

ExperimentConfig parse_experiment(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  c.base_dir = base_dir;
  bool have_env = false;
  std::set<std::string> seen;
  for (const kv::Entry& e : kv::parse(text)) {
    if (!seen.insert(e.key).second) throw ParseError(e.line, "duplicate key '" + e.key + "'");
    const std::size_t line = e.line;
    if (e.key == "name") {
      c.name = e.value;
    } else if (e.key == "env") {
      c.env = kv::parse_call(e.value, line);
      have_env = true;
    } else if (e.key == "constraints" || e.key == "constraint") {
      c.constraint_paths = kv::parse_list(e.value);
    } else if (e.key == "enforcement") {
      c.agent.enforcement = parse_enforcement(kv::parse_call(e.value, line));
    } else if (e.key == "augmentation") {
      if (e.value == "none") {
        c.agent.augmentation = Augmentation::kNone;
      } else if (e.value == "product") {
        c.agent.augmentation = Augmentation::kProduct;
      } else {
        throw ParseError(line, "augmentation must be none or product");
      }
    } else if (e.key == "dense") {
      c.agent.dense = kv::to_bool(e.value, line);
    } else if (e.key == "beta") {
      c.agent.beta = kv::to_double(e.value, line);
    } else if (e.key == "tv_baseline") {
      c.agent.tv_baseline = kv::to_double(e.value, line);
    } else if (e.key == "seeds") {
      c.seeds = parse_seeds(e.value, line);
    } else if (e.key == "episodes") {
      const long long n = kv::to_int(e.value, line);
      if (n <= 0) throw ParseError(line, "episodes must be positive");
      c.agent.episodes = static_cast<std::size_t>(n);
    } else if (e.key == "eval_episodes") {
      const long long n = kv::to_int(e.value, line);
      if (n < 0) throw ParseError(line, "eval_episodes must be non-negative");
      c.agent.eval_episodes = static_cast<std::size_t>(n);
    } else if (e.key == "output") {
      c.output = e.value;
    } else if (e.key == "alpha") {
      c.agent.q.alpha = kv::to_double(e.value, line);
    } else if (e.key == "gamma") {
      c.agent.q.gamma = kv::to_double(e.value, line);
    } else if (e.key == "epsilon_start") {
      c.agent.q.epsilon_start = kv::to_double(e.value, line);
    } else if (e.key == "epsilon_end") {
      c.agent.q.epsilon_end = kv::to_double(e.value, line);
    } else if (e.key == "epsilon_decay") {
      c.agent.q.epsilon_decay = kv::to_double(e.value, line);
    } else {
      throw ParseError(line, "unknown key '" + e.key + "'");
    }
  }
  if (!have_env) throw ConfigError("experiment has no env");
  c.agent.validate();
  return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return parse_experiment(read_text_file(path), path.parent_path());
}

std::vector<std::shared_ptr<const ConstraintSpec>> load_constraints(const ExperimentConfig& config) {
  std::vector<std::shared_ptr<const ConstraintSpec>> specs;
  for (const auto& path : config.constraint_paths) {
    specs.push_back(std::make_shared<const ConstraintSpec>(load_spec(resolve(config, path))));
  }
  return specs;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  result.config = config;
  const auto specs = load_constraints(config);
  for (const auto& s : specs) result.constraint_names.push_back(s->name);
  for (std::uint64_t seed : config.seeds) {
    auto env = make_environment(config.env, seed);
    result.env_descriptions.push_back(env->description());
    Agent agent(*env, specs, config.agent, seed);
    result.runs.push_back(agent.run());
  }
  return result;
}

Stat summarize(const std::vector<double>& values) {
  Stat s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    s.se = s.sd / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

std::vector<double> eval_violation_means(const ExperimentResult& result) {
  std::vector<double> out;
  for (const auto& run : result.runs) out.push_back(mean_of(run.eval, [](const auto& m) { return m.violations; }));
  return out;
}

std::vector<double> train_cost_rates(const ExperimentResult& result) {
  std::vector<double> out;
  for (const auto& run : result.runs) out.push_back(cost_rate(run.train));
  return out;
}

void write_metrics_csv(std::ostream& out, const ExperimentResult& result, Phase phase) {
  const auto& names = result.constraint_names;
  const bool per_constraint = names.size() > 1;
  out << "seed,episode,return,cost,violations,steps,lambda,cumulative_cost";
  if (per_constraint) {
    for (const auto& n : names) out << ",cost[" << n << "],violations[" << n << "],lambda[" << n << "]";
  }
  out << '\n';
  for (const auto& run : result.runs) {
    for (const auto& m : phase == Phase::kTrain ? run.train : run.eval) {
      out << m.seed << ',' << m.episode << ',' << format_number(m.ret) << ',' << format_number(m.cost) << ','
          << m.violations << ',' << m.steps << ',' << format_number(m.lambda) << ','
          << format_number(m.cumulative_cost);
      if (per_constraint) {
        for (std::size_t i = 0; i < names.size(); ++i) {
          out << ',' << format_number(m.constraint_costs[i]) << ',' << m.constraint_violations[i] << ','
              << format_number(m.constraint_lambdas[i]);
        }
      }
      out << '\n';
    }
  }
}

std::string summary_json(const ExperimentResult& result) {
  using nlohmann::ordered_json;
  const ExperimentConfig& c = result.config;
  ordered_json j;
  j["name"] = c.name;
  j["env"] = result.env_descriptions.empty() ? std::string() : result.env_descriptions.front();
  j["constraints"] = result.constraint_names;
  j["enforcement"] = c.enforcement_text();
  j["augmentation"] = c.agent.augmentation == Augmentation::kProduct ? "product" : "none";
  j["dense"] = c.agent.dense;
  j["beta"] = c.agent.beta;
  j["episodes"] = c.agent.episodes;
  j["eval_episodes"] = c.agent.eval_episodes;
  j["seeds"] = c.seeds;

  std::vector<double> train_ret, train_cost, train_viol, eval_ret, eval_viol, eval_steps, eval_goal;
  ordered_json per_seed = ordered_json::array();
  for (std::size_t r = 0; r < result.runs.size(); ++r) {
    const RunResult& run = result.runs[r];
    ordered_json s;
    s["seed"] = run.seed;
    s["env"] = result.env_descriptions[r];
    s["train_cost_rate"] = cost_rate(run.train);
    s["train_return"] = mean_of(run.train, [](const auto& m) { return m.ret; });
    s["train_violations"] = mean_of(run.train, [](const auto& m) { return m.violations; });
    s["eval_return"] = mean_of(run.eval, [](const auto& m) { return m.ret; });
    s["eval_violations"] = mean_of(run.eval, [](const auto& m) { return m.violations; });
    s["eval_steps"] = mean_of(run.eval, [](const auto& m) { return m.steps; });
    s["eval_goal_rate"] = mean_of(run.eval, [](const auto& m) { return m.reached_goal ? 1 : 0; });
    s["eval_fallbacks"] = mean_of(run.eval, [](const auto& m) { return m.fallbacks; });
    s["final_lambda"] = run.final_lambdas;
    if (!run.estimators.empty()) {
      ordered_json tv = ordered_json::array();
      for (const auto& est : run.estimators) {
        ordered_json e = ordered_json::array();
        for (double x : est.estimates()) e.push_back(number_or_null(x));
        tv.push_back(e);
      }
      s["expected_tv"] = tv;
    }
    per_seed.push_back(s);
    train_ret.push_back(s["train_return"].get<double>());
    train_cost.push_back(s["train_cost_rate"].get<double>());
    train_viol.push_back(s["train_violations"].get<double>());
    eval_ret.push_back(s["eval_return"].get<double>());
    eval_viol.push_back(s["eval_violations"].get<double>());
    eval_steps.push_back(s["eval_steps"].get<double>());
    eval_goal.push_back(s["eval_goal_rate"].get<double>());
  }
  j["summary"] = {
      {"train_return", stat_json(summarize(train_ret))},
      {"train_violations_per_episode", stat_json(summarize(train_viol))},
      {"train_cost_rate", stat_json(summarize(train_cost))},
      {"eval_return", stat_json(summarize(eval_ret))},
      {"eval_violations_per_episode", stat_json(summarize(eval_viol))},
      {"eval_steps", stat_json(summarize(eval_steps))},
      {"eval_goal_rate", stat_json(summarize(eval_goal))},
  };
  j["runs"] = per_seed;
  return j.dump(2) + "\n";
}

std::string summary_text(const ExperimentResult& result) {
  std::ostringstream out;
  const ExperimentConfig& c = result.config;
  out << c.name << ": " << (result.env_descriptions.empty() ? "" : result.env_descriptions.front()) << '\n';
  out << "  constraints:";
  for (const auto& n : result.constraint_names) out << ' ' << n;
  if (result.constraint_names.empty()) out << " (none)";
  out << "\n  enforcement: " << c.enforcement_text()
      << "  augmentation: " << (c.agent.augmentation == Augmentation::kProduct ? "product" : "none")
      << "  dense: " << (c.agent.dense ? "true" : "false") << '\n';
  out << "  seeds: " << c.seeds.size() << "  episodes: " << c.agent.episodes
      << "  eval_episodes: " << c.agent.eval_episodes << '\n';
  std::vector<double> eval_ret;
  for (const auto& run : result.runs) eval_ret.push_back(mean_of(run.eval, [](const auto& m) { return m.ret; }));
  const Stat viol = summarize(eval_violation_means(result));
  const Stat rate = summarize(train_cost_rates(result));
  const Stat ret = summarize(eval_ret);
  out << "  eval return:             " << format_number(ret.mean) << " +/- " << format_number(ret.sd) << '\n';
  out << "  eval violations/episode: " << format_number(viol.mean) << " +/- " << format_number(viol.sd) << '\n';
  out << "  train cost rate:         " << format_number(rate.mean) << " +/- " << format_number(rate.sd) << '\n';
  return out.str();
}

std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result, const std::string& output) {
  const std::filesystem::path base(output);
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  const std::vector<std::filesystem::path> paths{
      base.string() + ".csv", base.string() + "_eval.csv", base.string() + ".json"};
  const auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + p.string());
    return f;
  };
  {
    auto f = open(paths[0]);
    write_metrics_csv(f, result, Phase::kTrain);
  }
  {
    auto f = open(paths[1]);
    write_metrics_csv(f, result, Phase::kEval);
  }
  {
    auto f = open(paths[2]);
    f << summary_json(result);
  }
  return paths;
}

}  // namespace flc
