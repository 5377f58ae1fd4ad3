#include "flc/constraint.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "flc/builders.hpp"
#include "flc/error.hpp"
#include "flc/kvfile.hpp"

namespace flc {

namespace detail {
// Generated from constraints/*.flc at build time.
extern const std::vector<std::pair<std::string_view, std::string_view>>& builtin_specs();
}  // namespace detail

std::vector<std::string> builtin_spec_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::builtin_specs()) names.emplace_back(name);
  return names;
}

std::optional<std::string_view> builtin_spec_text(std::string_view file_name) {
  for (const auto& [name, text] : detail::builtin_specs()) {
    if (name == file_name) return text;
  }
  return std::nullopt;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

Dfa build_from_builder(const kv::Call& call, const Alphabet& alphabet) {
  const std::size_t line = call.line;
  if (call.name == "successive_identical") {
    call.expect_only({"k", "neutral"}, line);
    long long k = call.get_int("k", 3);
    if (k < 1) throw ParseError(line, "successive_identical: k must be positive");
    auto neutral = kv::parse_list(call.get("neutral", "[]"));
    for (const auto& s : neutral) {
      if (!alphabet.contains(s)) throw ValidationError("successive_identical: unknown neutral symbol '" + s + "'");
    }
    return builders::successive_identical(alphabet, static_cast<unsigned>(k), neutral);
  }
  if (call.name == "sum_threshold") {
    call.expect_only({"increment", "window", "threshold"}, line);
    long long window = call.get_int("window", 3);
    if (window < 1) throw ParseError(line, "sum_threshold: window must be positive");
    double increment = call.get_double("increment", 0.2);
    if (!(increment > 0.0)) throw ParseError(line, "sum_threshold: increment must be positive");
    return builders::sum_threshold(alphabet, increment, static_cast<unsigned>(window),
                                   call.get_double("threshold", 4.0));
  }
  if (call.name == "last_token") {
    call.expect_only({"accept"}, line);
    auto accept = kv::parse_list(call.get("accept", "[]"));
    if (accept.empty()) throw ParseError(line, "last_token: accept list is required");
    for (const auto& s : accept) {
      if (!alphabet.contains(s)) throw ValidationError("last_token: unknown accept symbol '" + s + "'");
    }
    return builders::last_token(alphabet, accept);
  }
  throw ValidationError("unknown builder '" + call.name + "'");
}

}  // namespace

ConstraintSpec parse_spec(std::string_view text, const CompileOptions& options) {
  auto entries = kv::parse(text);
  ConstraintSpec spec;
  spec.name = "constraint";
  std::optional<kv::Entry> alphabet_entry, pattern_entry, builder_entry, translator_entry;
  std::vector<kv::Entry> cost_entries;
  CompileOptions compile_options = options;

  auto once = [](std::optional<kv::Entry>& slot, const kv::Entry& e) {
    if (slot) throw ParseError(e.line, "duplicate key '" + e.key + "'");
    slot = e;
  };

  for (const auto& e : entries) {
    if (e.key == "name") {
      spec.name = e.value;
    } else if (e.key == "alphabet") {
      once(alphabet_entry, e);
    } else if (e.key == "pattern") {
      once(pattern_entry, e);
    } else if (e.key == "builder") {
      once(builder_entry, e);
    } else if (e.key == "translator") {
      once(translator_entry, e);
    } else if (e.key == "mode") {
      if (e.value == "reset") {
        spec.mode = ViolationMode::kReset;
      } else if (e.value == "absorbing") {
        spec.mode = ViolationMode::kAbsorbing;
      } else {
        throw ParseError(e.line, "mode must be 'reset' or 'absorbing'");
      }
    } else if (e.key == "limit") {
      spec.limit = kv::to_double(e.value, e.line);
      if (spec.limit < 0.0) throw ValidationError("limit must be non-negative");
    } else if (e.key == "reset_heuristic") {
      compile_options.reset_heuristic = kv::to_bool(e.value, e.line);
    } else if (e.key.rfind("cost.", 0) == 0) {
      cost_entries.push_back(e);
    } else {
      throw ParseError(e.line, "unknown key '" + e.key + "'");
    }
  }

  if (!alphabet_entry) throw ParseError(0, "missing 'alphabet'");
  try {
    spec.alphabet = Alphabet(kv::parse_list(alphabet_entry->value));
  } catch (const ValidationError& err) {
    throw ParseError(alphabet_entry->line, err.what());
  }

  if (pattern_entry && builder_entry) {
    throw ParseError(builder_entry->line, "give either 'pattern' or 'builder', not both");
  }
  if (pattern_entry) {
    spec.source = pattern_entry->value;
    spec.reset_heuristic = compile_options.reset_heuristic;
    try {
      spec.dfa = std::make_shared<const Dfa>(compile(spec.source, spec.alphabet, compile_options));
    } catch (const SyntaxError& err) {
      throw ParseError(pattern_entry->line, "pattern: " + std::string(err.what()));
    }
  } else if (builder_entry) {
    spec.source = builder_entry->value;
    spec.from_builder = true;
    spec.dfa = std::make_shared<const Dfa>(
        build_from_builder(kv::parse_call(builder_entry->value, builder_entry->line), spec.alphabet));
  } else {
    throw ParseError(0, "missing 'pattern' or 'builder'");
  }

  spec.translator = translator_entry
                        ? Translator::bind(kv::parse_call(translator_entry->value, translator_entry->line),
                                           spec.alphabet)
                        : Translator::identity(spec.alphabet);

  const Dfa& dfa = *spec.dfa;
  spec.costs.assign(dfa.num_states(), 0.0);
  for (StateId q : dfa.accepting_states()) spec.costs[q] = 1.0;
  for (const auto& e : cost_entries) {
    long long q = kv::to_int(std::string_view(e.key).substr(5), e.line);
    if (q < 0 || static_cast<std::size_t>(q) >= dfa.num_states()) {
      throw ValidationError("line " + std::to_string(e.line) + ": cost assigned to nonexistent state " +
                            std::to_string(q) + " (recognizer has " + std::to_string(dfa.num_states()) +
                            " states)");
    }
    double c = kv::to_double(e.value, e.line);
    if (c < 0.0) throw ValidationError("line " + std::to_string(e.line) + ": cost must be non-negative");
    spec.costs[static_cast<std::size_t>(q)] = c;
  }
  return spec;
}

ConstraintSpec load_spec(const std::filesystem::path& path, const CompileOptions& options) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    if (auto text = builtin_spec_text(path.filename().string())) return parse_spec(*text, options);
    if (auto text = builtin_spec_text(path.filename().string() + ".flc")) return parse_spec(*text, options);
  }
  return parse_spec(read_text_file(path), options);
}

RecognizerRuntime::RecognizerRuntime(std::shared_ptr<const ConstraintSpec> spec)
    : spec_(std::move(spec)), q_(spec_->dfa->start()) {}

RecognizerStep RecognizerRuntime::step_symbol(SymbolId token) {
  const Dfa& d = dfa();
  RecognizerStep out;
  out.token = token;
  out.q_next = d.step(q_, token);
  out.cost = spec_->cost(out.q_next);
  out.violated = d.is_accepting(out.q_next);
  q_ = out.q_next;
  if (out.violated) {
    ++violations_;
    ++total_violations_;
    if (spec_->mode == ViolationMode::kReset) q_ = d.start();
  }
  episode_cost_ += out.cost;
  total_cost_ += out.cost;
  ++episode_steps_;
  ++total_steps_;
  return out;
}

RecognizerStep RecognizerRuntime::step(const Transition& transition) {
  return step_symbol(spec_->translator.translate(transition));
}

RecognizerStep RecognizerRuntime::step_token(std::string_view token) {
  return step_symbol(spec_->alphabet.index_of(token));
}

StateId RecognizerRuntime::lookahead(const Transition& transition) const {
  return dfa().step(q_, spec_->translator.translate(transition));
}

bool RecognizerRuntime::would_violate(const Transition& transition) const {
  return dfa().is_accepting(lookahead(transition));
}

void RecognizerRuntime::reset() {
  q_ = dfa().start();
  violations_ = 0;
  episode_cost_ = 0.0;
  episode_steps_ = 0;
}

AugmentedState augment(std::int64_t mdp_state, StateId q, Encoding encoding, std::size_t num_states) {
  if (num_states == 0 || q >= num_states) {
    throw IndexError("recognizer state " + std::to_string(q) + " out of range for " +
                     std::to_string(num_states) + " states");
  }
  if (mdp_state < 0) throw IndexError("negative MDP state index");
  AugmentedState out;
  out.mdp_state = mdp_state;
  out.q = q;
  out.encoding = encoding;
  if (encoding == Encoding::kOneHot) {
    out.one_hot.assign(num_states, 0.0);
    out.one_hot[q] = 1.0;
  } else {
    out.product_index = mdp_state * static_cast<std::int64_t>(num_states) + q;
  }
  return out;
}

unsigned embedding_dim(std::size_t num_states) {
  if (num_states < 2) throw DomainError("embedding_dim needs at least 2 recognizer states");
  return static_cast<unsigned>(std::bit_width(num_states) - 1);
}

}  // namespace flc
