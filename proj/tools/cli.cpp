#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "flc/constraint.hpp"
#include "flc/error.hpp"
#include "flc/experiment.hpp"
#include "flc/kvfile.hpp"
#include "flc/oracle.hpp"
#include "flc/shaping.hpp"

namespace flc::cli {

namespace {

std::string state_name(StateId q) { return "q" + std::to_string(q); }

void print_summary(std::ostream& out, const ConstraintSpec& spec) {
  const Dfa& dfa = *spec.dfa;
  out << "name:       " << spec.name << '\n';
  out << "alphabet:   " << spec.alphabet.size() << " symbols [";
  for (SymbolId a = 0; a < spec.alphabet.size(); ++a) out << (a ? " " : "") << spec.alphabet.name(a);
  out << "]\n";
  out << (spec.from_builder ? "builder:    " : "pattern:    ");
  if (spec.source.size() > 120) {
    out << spec.source.substr(0, 117) << "...\n";
  } else {
    out << spec.source << '\n';
  }
  out << "translator: " << spec.translator.description() << '\n';
  out << "mode:       " << (spec.mode == ViolationMode::kReset ? "reset" : "absorbing") << '\n';
  out << "limit:      " << format_number(spec.limit) << '\n';
  out << "states:     " << dfa.num_states() << " (start " << state_name(dfa.start()) << ")\n";
  out << "accepting:";
  for (StateId q : dfa.accepting_states()) out << ' ' << state_name(q);
  out << '\n';
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

TransitionMatrix read_chain(const std::string& path) {
  TransitionMatrix chain;
  std::istringstream lines(read_text_file(path));
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    const std::string t = kv::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields(t);
    std::vector<double> row;
    std::string field;
    while (fields >> field) row.push_back(kv::to_double(field, number));
    chain.push_back(std::move(row));
  }
  if (chain.empty()) throw ParseError(0, path + ": chain file has no rows");
  return chain;
}

int cmd_compile(const std::string& spec_path, bool dot, bool json, const std::string& output, std::ostream& out) {
  const ConstraintSpec spec = load_spec(spec_path);
  if (dot) {
    write_text(output, export_dfa(*spec.dfa, ExportFormat::kDot), out);
  } else if (json) {
    write_text(output, export_dfa(*spec.dfa, ExportFormat::kJson), out);
  } else {
    std::ostringstream s;
    print_summary(s, spec);
    write_text(output, s.str(), out);
  }
  return kExitOk;
}

int cmd_check(const std::string& spec_path, const std::vector<std::string>& tokens, bool quiet, std::ostream& out) {
  auto spec = std::make_shared<const ConstraintSpec>(load_spec(spec_path));
  RecognizerRuntime rt(spec);
  StateId last = rt.state();
  std::vector<std::size_t> violations;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const RecognizerStep step = rt.step_token(tokens[i]);
    last = step.q_next;
    if (!quiet) {
      out << "step " << (i + 1) << ": " << tokens[i] << " -> " << state_name(step.q_next);
      if (step.cost != 0.0) out << "  cost " << format_number(step.cost);
      if (step.violated) out << "  VIOLATION";
      out << '\n';
    }
    if (step.violated) violations.push_back(i + 1);
  }
  for (std::size_t v : violations) out << "violation at step " << v << '\n';
  out << "final state: " << state_name(last) << '\n';
  out << "accepted: " << (rt.dfa().is_accepting(last) ? "yes" : "no") << '\n';
  out << "violations: " << violations.size() << '\n';
  return kExitOk;
}

int cmd_equiv(const std::string& spec_path, const std::string& other, bool oracle, std::size_t max_len,
              std::size_t samples, std::uint64_t seed, std::ostream& out) {
  const ConstraintSpec spec = load_spec(spec_path);
  if (!other.empty()) {
    const ConstraintSpec rhs = load_spec(other);
    const Equivalence e = equivalent(*spec.dfa, *rhs.dfa);
    if (e) {
      out << "EQUIVALENT (product automaton)\n";
      return kExitOk;
    }
    out << "NOT EQUIVALENT: shortest witness [" << spec.alphabet.decode(e.witness).size() << " symbols]";
    for (const auto& s : spec.alphabet.decode(e.witness)) out << ' ' << s;
    out << '\n';
    return kExitMismatch;
  }
  if (!oracle) throw ConfigError("equiv needs --oracle or a second spec");
  const OracleReport r = check_against_oracle(spec, max_len, 20'000'000, samples, seed);
  if (r.agree) {
    if (r.exhaustive) {
      out << "EQUIVALENT (exhaustive)\n";
    } else {
      out << "EQUIVALENT (sampled)\n";
    }
    out << r.words_checked << " words of length <= " << max_len << " checked\n";
    return kExitOk;
  }
  const Word& w = *r.counterexample;
  out << "NOT EQUIVALENT: counterexample [";
  const auto names = spec.alphabet.decode(w);
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? " " : "") << names[i];
  out << "] automaton " << (spec.dfa->accepts(w) ? "accepts" : "rejects") << '\n';
  return kExitMismatch;
}

int cmd_run(const std::string& cfg_path, const std::string& output_override, const std::string& hard_mode,
            std::ostream& out) {
  ExperimentConfig config = load_experiment(cfg_path);
  if (!hard_mode.empty()) {
    if (config.agent.enforcement.kind != EnforcementKind::kHard) {
      throw ConfigError("--hard-mode needs a config with hard enforcement");
    }
    config.agent.enforcement.hard_mode = parse_hard_mode(hard_mode);
  }
  const ExperimentResult result = run_experiment(config);
  out << summary_text(result);
  const std::string output = output_override.empty() ? config.output : output_override;
  if (!output.empty()) {
    for (const auto& p : write_outputs(result, output)) out << "wrote " << p.string() << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const std::string& cfg_path, const std::vector<double>& lambdas, const std::string& output_override,
              std::ostream& out) {
  const ExperimentConfig base = load_experiment(cfg_path);
  const auto kind = base.agent.enforcement.kind;
  if (kind != EnforcementKind::kNone && kind != EnforcementKind::kShaping) {
    throw ConfigError("sweep varies the shaping penalty; the config's enforcement must be none or shaping");
  }
  const std::string output = output_override.empty() ? base.output : output_override;
  std::ostringstream table;
  table << "lambda,eval_violations_mean,eval_violations_sd,eval_violations_se,eval_return_mean,train_cost_rate_mean\n";
  out << std::left << std::setw(10) << "lambda" << std::setw(28) << "eval violations/episode"
      << "eval return\n";
  for (double lambda : lambdas) {
    if (!(lambda >= 0.0)) throw ConfigError("lambda values are non-negative magnitudes");
    ExperimentConfig c = base;
    c.agent.enforcement.kind = EnforcementKind::kShaping;
    c.agent.enforcement.lambda = lambda;
    const ExperimentResult result = run_experiment(c);
    const Stat viol = summarize(eval_violation_means(result));
    std::vector<double> ret;
    for (const auto& r : result.runs) {
      double s = 0.0;
      for (const auto& m : r.eval) s += m.ret;
      ret.push_back(r.eval.empty() ? 0.0 : s / static_cast<double>(r.eval.size()));
    }
    const Stat rs = summarize(ret);
    const Stat rate = summarize(train_cost_rates(result));
    out << std::setw(10) << format_number(lambda) << std::setw(28)
        << (format_number(viol.mean) + " +/- " + format_number(viol.se)) << format_number(rs.mean) << '\n';
    table << format_number(lambda) << ',' << format_number(viol.mean) << ',' << format_number(viol.sd) << ','
          << format_number(viol.se) << ',' << format_number(rs.mean) << ',' << format_number(rate.mean) << '\n';
    if (!output.empty()) write_outputs(result, output + "_lambda-" + format_number(lambda));
  }
  if (!output.empty()) {
    const std::string path = output + "_sweep.csv";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << table.str();
    out << "wrote " << path << '\n';
  }
  return kExitOk;
}

int cmd_hitting(const std::string& spec_path, const std::string& chain_path, std::size_t episodes,
                std::size_t max_steps, std::uint64_t seed, long long start, double baseline, bool json,
                std::ostream& out) {
  const ConstraintSpec spec = load_spec(spec_path);
  const Dfa& dfa = *spec.dfa;
  const TransitionMatrix chain = read_chain(chain_path);
  if (chain.size() != dfa.num_states()) {
    throw ConfigError("chain has " + std::to_string(chain.size()) + " rows but the recognizer has " +
                      std::to_string(dfa.num_states()) + " states");
  }
  const std::vector<double> exact = exact_hitting_times(chain, dfa.accepting());

  const StateId q0 = start < 0 ? dfa.start() : static_cast<StateId>(start);
  if (q0 >= dfa.num_states()) throw ConfigError("start state out of range");
  TvEstimator estimator(dfa.accepting());
  Rng rng(seed, 0x7417);
  for (std::size_t e = 0; e < episodes; ++e) {
    RecognizerTrace trace;
    StateId q = q0;
    trace.states.push_back(q);
    for (std::size_t t = 1; t <= max_steps && !dfa.is_accepting(q); ++t) {
      const double u = rng.uniform01();
      double acc = 0.0;
      StateId next = static_cast<StateId>(chain[q].size() - 1);
      for (StateId j = 0; j < chain[q].size(); ++j) {
        acc += chain[q][j];
        if (u < acc) {
          next = j;
          break;
        }
      }
      q = next;
      trace.states.push_back(q);
      if (dfa.is_accepting(q)) trace.violation_times.push_back(t);
    }
    estimator.update(trace);
  }

  const double b = baseline > 0.0 ? baseline : 1.0;
  if (json) {
    out << potentials_to_json(estimator, b) << '\n';
    return kExitOk;
  }
  out << std::left << std::setw(8) << "state" << std::setw(11) << "accepting" << std::setw(14) << "exact"
      << std::setw(14) << "empirical" << std::setw(10) << "samples" << "phi(exact)\n";
  for (StateId q = 0; q < dfa.num_states(); ++q) {
    out << std::setw(8) << state_name(q) << std::setw(11) << (dfa.is_accepting(q) ? "yes" : "no") << std::setw(14)
        << format_number(exact[q]) << std::setw(14) << format_number(estimator.estimate(q)) << std::setw(10)
        << estimator.sample_count(q) << format_number(potential(exact[q], b)) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Formal-language constraints for constrained MDPs", "flc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "flc 0.1.0");

  std::string spec_path, other_spec, cfg_path, output, chain_path, hard_mode;
  bool dot = false, json = false, quiet = false, oracle = false;
  std::vector<std::string> tokens;
  std::size_t max_len = 10, samples = 10'000, episodes = 100'000, max_steps = 10'000;
  std::uint64_t seed = 0;
  long long start = -1;
  double baseline = 0.0;
  std::vector<double> lambdas{0.0, 0.001, 0.0025, 0.005, 0.01};

  auto* compile_cmd = app.add_subcommand("compile", "Compile a .flc spec and print its automaton");
  compile_cmd->add_option("spec", spec_path, "Constraint file or bundled name")->required();
  auto* dot_flag = compile_cmd->add_flag("--dot", dot, "Graphviz DOT output");
  compile_cmd->add_flag("--json", json, "JSON output")->excludes(dot_flag);
  compile_cmd->add_option("-o,--output", output, "Write to a file instead of standard output");

  auto* check_cmd = app.add_subcommand("check", "Feed tokens to a recognizer and report violations");
  check_cmd->add_option("spec", spec_path, "Constraint file or bundled name")->required();
  check_cmd->add_option("tokens", tokens, "Tokens, in order")->required();
  check_cmd->add_flag("-q,--quiet", quiet, "Only print the verdict");

  auto* equiv_cmd = app.add_subcommand("equiv", "Check a compiled automaton against a reference");
  equiv_cmd->add_option("spec", spec_path, "Constraint file or bundled name")->required();
  equiv_cmd->add_option("other", other_spec, "Second spec; compares the two automata");
  equiv_cmd->add_flag("--oracle", oracle, "Compare against brute-force membership on enumerated words");
  equiv_cmd->add_option("--max-len", max_len, "Longest word to enumerate")->capture_default_str();
  equiv_cmd->add_option("--samples", samples, "Words drawn when exhaustive enumeration is too large")
      ->capture_default_str();
  equiv_cmd->add_option("--seed", seed, "Sampling seed")->capture_default_str();

  auto* run_cmd = app.add_subcommand("run", "Train and evaluate as configured, writing CSV and JSON");
  run_cmd->add_option("config", cfg_path, "Experiment .cfg file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--output", output, "Output prefix (overrides the config's output)");
  run_cmd->add_option("--hard-mode", hard_mode, "Override when hard shaping applies")
      ->check(CLI::IsMember({"both", "train", "eval"}));

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a config once per shaping penalty");
  sweep_cmd->add_option("config", cfg_path, "Experiment .cfg file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--lambda", lambdas, "Penalty magnitudes")->expected(1, -1)->capture_default_str();
  sweep_cmd->add_option("-o,--output", output, "Output prefix (overrides the config's output)");

  auto* hitting_cmd = app.add_subcommand("hitting", "Exact vs empirical expected time to violation");
  hitting_cmd->add_option("spec", spec_path, "Constraint file or bundled name")->required();
  hitting_cmd->add_option("--chain", chain_path, "Row-stochastic matrix over recognizer states, one row per line")
      ->required()
      ->check(CLI::ExistingFile);
  hitting_cmd->add_option("--episodes", episodes, "Sampled episodes")->capture_default_str();
  hitting_cmd->add_option("--max-steps", max_steps, "Episode cap")->capture_default_str();
  hitting_cmd->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  hitting_cmd->add_option("--start", start, "Start state (default: the recognizer's start)");
  hitting_cmd->add_option("--baseline", baseline, "t_v baseline for the potential column (default 1)");
  hitting_cmd->add_flag("--json", json, "Estimates and potentials as JSON");

  std::vector<std::string> storage{"flc"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*compile_cmd) return cmd_compile(spec_path, dot, json, output, out);
    if (*check_cmd) return cmd_check(spec_path, tokens, quiet, out);
    if (*equiv_cmd) return cmd_equiv(spec_path, other_spec, oracle, max_len, samples, seed, out);
    if (*run_cmd) return cmd_run(cfg_path, output, hard_mode, out);
    if (*sweep_cmd) return cmd_sweep(cfg_path, lambdas, output, out);
    if (*hitting_cmd) {
      return cmd_hitting(spec_path, chain_path, episodes, max_steps, seed, start, baseline, json, out);
    }
  } catch (const Error& e) {
    err << "flc: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "flc: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace flc::cli
