#include "flc/dfa.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include "json.hpp"
#include <unordered_map>

#include "flc/error.hpp"

namespace flc {

Dfa::Dfa(Alphabet alphabet, std::size_t num_states, std::vector<StateId> delta, StateId start,
         std::vector<bool> accepting)
    : alphabet_(std::move(alphabet)),
      num_states_(num_states),
      delta_(std::move(delta)),
      start_(start),
      accepting_(std::move(accepting)) {
  if (num_states_ == 0) throw ValidationError("DFA needs at least one state");
  if (delta_.size() != num_states_ * alphabet_.size()) {
    throw ValidationError("transition table is not complete");
  }
  for (StateId t : delta_) {
    if (t >= num_states_) throw ValidationError("transition target out of range");
  }
  if (start_ >= num_states_) throw ValidationError("start state out of range");
  if (accepting_.size() != num_states_) throw ValidationError("accepting mask has wrong size");
}

std::vector<StateId> Dfa::accepting_states() const {
  std::vector<StateId> out;
  for (StateId q = 0; q < num_states_; ++q) {
    if (accepting_[q]) out.push_back(q);
  }
  return out;
}

StateId Dfa::step(StateId q, SymbolId a) const {
  if (q >= num_states_) throw IndexError("state " + std::to_string(q) + " out of range");
  if (a >= alphabet_.size()) throw UnknownSymbol("#" + std::to_string(a));
  return delta_[q * alphabet_.size() + a];
}

StateId Dfa::step(StateId q, std::string_view token) const {
  return step(q, alphabet_.index_of(token));
}

StateId Dfa::run(std::span<const SymbolId> word) const { return run(start_, word); }

StateId Dfa::run(StateId from, std::span<const SymbolId> word) const {
  StateId q = from;
  for (SymbolId a : word) q = step(q, a);
  return q;
}

bool Dfa::accepts(const std::vector<std::string>& word) const {
  Word w = alphabet_.encode(word);
  return accepts(std::span<const SymbolId>(w));
}

CompileOptions CompileOptions::from_environment() {
  CompileOptions options;
  if (const char* env = std::getenv("FLC_STATE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) options.state_budget = static_cast<std::size_t>(v);
  }
  return options;
}

namespace {

struct Nfa {
  struct Node {
    std::vector<std::uint32_t> eps;
    std::vector<std::pair<SymbolId, std::uint32_t>> edges;
  };
  std::vector<Node> nodes;

  std::uint32_t add() {
    nodes.emplace_back();
    return static_cast<std::uint32_t>(nodes.size() - 1);
  }
};

struct Fragment {
  std::uint32_t in;
  std::uint32_t out;
};

class Thompson {
 public:
  Thompson(Nfa& nfa, std::size_t alphabet_size) : nfa_(nfa), sigma_(alphabet_size) {}

  Fragment build(const RegexAst& ast) {
    using K = RegexAst::Kind;
    switch (ast.kind) {
      case K::kEmpty: {
        return {nfa_.add(), nfa_.add()};
      }
      case K::kEpsilon: {
        Fragment f{nfa_.add(), nfa_.add()};
        nfa_.nodes[f.in].eps.push_back(f.out);
        return f;
      }
      case K::kSym: {
        Fragment f{nfa_.add(), nfa_.add()};
        nfa_.nodes[f.in].edges.emplace_back(ast.symbol, f.out);
        return f;
      }
      case K::kDot: {
        Fragment f{nfa_.add(), nfa_.add()};
        for (SymbolId a = 0; a < sigma_; ++a) nfa_.nodes[f.in].edges.emplace_back(a, f.out);
        return f;
      }
      case K::kConcat: {
        if (ast.children.empty()) return build(RegexAst::epsilon());
        Fragment first = build(ast.children.front());
        std::uint32_t tail = first.out;
        for (std::size_t i = 1; i < ast.children.size(); ++i) {
          Fragment next = build(ast.children[i]);
          nfa_.nodes[tail].eps.push_back(next.in);
          tail = next.out;
        }
        return {first.in, tail};
      }
      case K::kAlt: {
        Fragment f{nfa_.add(), nfa_.add()};
        for (const auto& child : ast.children) {
          Fragment c = build(child);
          nfa_.nodes[f.in].eps.push_back(c.in);
          nfa_.nodes[c.out].eps.push_back(f.out);
        }
        return f;
      }
      case K::kStar:
      case K::kPlus:
      case K::kOpt: {
        Fragment f{nfa_.add(), nfa_.add()};
        Fragment c = build(ast.children.front());
        nfa_.nodes[f.in].eps.push_back(c.in);
        nfa_.nodes[c.out].eps.push_back(f.out);
        if (ast.kind != K::kPlus) nfa_.nodes[f.in].eps.push_back(f.out);
        if (ast.kind != K::kOpt) nfa_.nodes[c.out].eps.push_back(c.in);
        return f;
      }
      case K::kRepeat: {
        Fragment first = build(ast.children.front());
        std::uint32_t tail = first.out;
        for (unsigned i = 1; i < ast.count; ++i) {
          Fragment next = build(ast.children.front());
          nfa_.nodes[tail].eps.push_back(next.in);
          tail = next.out;
        }
        return {first.in, tail};
      }
    }
    throw ValidationError("malformed regex tree");
  }

 private:
  Nfa& nfa_;
  std::size_t sigma_;
};

void check_symbols(const RegexAst& ast, const Alphabet& alphabet) {
  if (ast.kind == RegexAst::Kind::kSym && ast.symbol >= alphabet.size()) {
    throw UnknownSymbol("#" + std::to_string(ast.symbol));
  }
  for (const auto& child : ast.children) check_symbols(child, alphabet);
}

using StateSet = std::vector<std::uint32_t>;

void close_over_epsilon(const Nfa& nfa, StateSet& set, std::vector<char>& mark) {
  std::vector<std::uint32_t> stack(set.begin(), set.end());
  for (auto s : set) mark[s] = 1;
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (auto t : nfa.nodes[s].eps) {
      if (!mark[t]) {
        mark[t] = 1;
        set.push_back(t);
        stack.push_back(t);
      }
    }
  }
  for (auto s : set) mark[s] = 0;
  std::sort(set.begin(), set.end());
}

struct SetHash {
  std::size_t operator()(const StateSet& s) const noexcept {
    std::size_t h = s.size();
    for (auto v : s) h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

Dfa determinize(const Nfa& nfa, Fragment frag, const Alphabet& alphabet, std::size_t budget) {
  const std::size_t sigma = alphabet.size();
  std::vector<char> mark(nfa.nodes.size(), 0);
  std::unordered_map<StateSet, StateId, SetHash> ids;
  std::vector<StateSet> sets;
  std::vector<StateId> delta;
  std::vector<bool> accepting;

  auto intern = [&](StateSet&& set) -> StateId {
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    if (sets.size() >= budget) {
      throw CapacityError("subset construction exceeded the state budget of " +
                          std::to_string(budget));
    }
    auto id = static_cast<StateId>(sets.size());
    accepting.push_back(std::binary_search(set.begin(), set.end(), frag.out));
    ids.emplace(set, id);
    sets.push_back(std::move(set));
    return id;
  };

  StateSet initial{frag.in};
  close_over_epsilon(nfa, initial, mark);
  intern(std::move(initial));

  std::vector<StateSet> buckets(sigma);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (auto& b : buckets) b.clear();
    for (auto s : sets[i]) {
      for (auto [a, t] : nfa.nodes[s].edges) buckets[a].push_back(t);
    }
    for (SymbolId a = 0; a < sigma; ++a) {
      StateSet next = buckets[a];
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      close_over_epsilon(nfa, next, mark);
      delta.push_back(intern(std::move(next)));
    }
  }
  return Dfa(alphabet, sets.size(), std::move(delta), 0, std::move(accepting));
}

// Non-accepting states from which no accepting state is reachable.
std::vector<bool> dead_states(const Dfa& dfa) {
  const std::size_t n = dfa.num_states();
  const std::size_t sigma = dfa.alphabet().size();
  std::vector<std::vector<StateId>> reverse(n);
  for (StateId q = 0; q < n; ++q) {
    for (SymbolId a = 0; a < sigma; ++a) reverse[dfa.step(q, a)].push_back(q);
  }
  std::vector<bool> live(n, false);
  std::deque<StateId> queue;
  for (StateId q : dfa.accepting_states()) {
    live[q] = true;
    queue.push_back(q);
  }
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (StateId p : reverse[q]) {
      if (!live[p]) {
        live[p] = true;
        queue.push_back(p);
      }
    }
  }
  std::vector<bool> dead(n);
  for (StateId q = 0; q < n; ++q) dead[q] = !live[q];
  return dead;
}

Dfa redirect_dead_to_start(const Dfa& dfa) {
  auto dead = dead_states(dfa);
  std::vector<StateId> delta = dfa.transitions();
  for (auto& t : delta) {
    if (dead[t]) t = dfa.start();
  }
  std::vector<bool> accepting(dfa.num_states());
  for (StateId q = 0; q < dfa.num_states(); ++q) accepting[q] = dfa.is_accepting(q);
  return Dfa(dfa.alphabet(), dfa.num_states(), std::move(delta), dfa.start(), std::move(accepting));
}

RegexAst strip_leading_any(const RegexAst& ast) {
  using K = RegexAst::Kind;
  auto is_any_star = [](const RegexAst& n) {
    return n.kind == K::kStar && n.children.front().kind == K::kDot;
  };
  if (ast.kind == K::kConcat && !ast.children.empty() && is_any_star(ast.children.front())) {
    std::vector<RegexAst> rest(ast.children.begin() + 1, ast.children.end());
    if (rest.size() == 1) return rest.front();
    return RegexAst::concat(std::move(rest));
  }
  return ast;
}

}  // namespace

Dfa compile(const RegexAst& ast, const Alphabet& alphabet, const CompileOptions& options) {
  check_symbols(ast, alphabet);
  const RegexAst& body = options.reset_heuristic ? strip_leading_any(ast) : ast;
  Nfa nfa;
  Fragment frag = Thompson(nfa, alphabet.size()).build(body);
  Dfa dfa = minimize(determinize(nfa, frag, alphabet, options.state_budget));
  if (options.reset_heuristic) dfa = minimize(redirect_dead_to_start(dfa));
  return dfa;
}

Dfa compile(std::string_view pattern, const Alphabet& alphabet, const CompileOptions& options) {
  return compile(parse_regex(pattern, alphabet), alphabet, options);
}

Dfa minimize(const Dfa& dfa) {
  const std::size_t sigma = dfa.alphabet().size();

  // Reachable states, numbered in BFS order.
  std::vector<StateId> order;
  std::vector<std::int64_t> index(dfa.num_states(), -1);
  index[dfa.start()] = 0;
  order.push_back(dfa.start());
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (SymbolId a = 0; a < sigma; ++a) {
      StateId t = dfa.step(order[i], a);
      if (index[t] < 0) {
        index[t] = static_cast<std::int64_t>(order.size());
        order.push_back(t);
      }
    }
  }
  const std::size_t n = order.size();

  // Moore refinement: split classes by (class, successor classes) until stable.
  std::vector<std::uint32_t> cls(n);
  for (std::size_t i = 0; i < n; ++i) cls[i] = dfa.is_accepting(order[i]) ? 1 : 0;
  std::size_t num_classes = 0;
  while (true) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> signatures;
    std::vector<std::uint32_t> next(n);
    std::vector<std::uint32_t> sig(sigma + 1);
    for (std::size_t i = 0; i < n; ++i) {
      sig[0] = cls[i];
      for (SymbolId a = 0; a < sigma; ++a) {
        sig[a + 1] = cls[static_cast<std::size_t>(index[dfa.step(order[i], a)])];
      }
      auto [it, inserted] =
          signatures.emplace(sig, static_cast<std::uint32_t>(signatures.size()));
      next[i] = it->second;
    }
    cls.swap(next);
    if (signatures.size() == num_classes) break;
    num_classes = signatures.size();
  }

  // Quotient, renumbered breadth-first from the start class.
  std::vector<std::int64_t> canon(num_classes, -1);
  std::vector<std::size_t> representative(num_classes);
  for (std::size_t i = n; i-- > 0;) representative[cls[i]] = i;
  std::vector<std::uint32_t> queue{cls[0]};
  canon[cls[0]] = 0;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    std::size_t rep = representative[queue[k]];
    for (SymbolId a = 0; a < sigma; ++a) {
      auto c = cls[static_cast<std::size_t>(index[dfa.step(order[rep], a)])];
      if (canon[c] < 0) {
        canon[c] = static_cast<std::int64_t>(queue.size());
        queue.push_back(c);
      }
    }
  }
  std::vector<StateId> delta(num_classes * sigma);
  std::vector<bool> accepting(num_classes);
  for (std::size_t k = 0; k < num_classes; ++k) {
    std::size_t rep = representative[queue[k]];
    accepting[k] = dfa.is_accepting(order[rep]);
    for (SymbolId a = 0; a < sigma; ++a) {
      auto c = cls[static_cast<std::size_t>(index[dfa.step(order[rep], a)])];
      delta[k * sigma + a] = static_cast<StateId>(canon[c]);
    }
  }
  return Dfa(dfa.alphabet(), num_classes, std::move(delta), 0, std::move(accepting));
}

Equivalence equivalent(const Dfa& a, const Dfa& b) {
  if (!(a.alphabet() == b.alphabet())) {
    throw AlphabetMismatch("cannot compare automata over different alphabets");
  }
  const std::size_t sigma = a.alphabet().size();
  const std::uint64_t nb = b.num_states();
  struct Visit {
    std::uint64_t parent;
    SymbolId symbol;
  };
  std::unordered_map<std::uint64_t, Visit> seen;
  std::deque<std::uint64_t> queue;
  const std::uint64_t root = std::uint64_t{a.start()} * nb + b.start();
  seen.emplace(root, Visit{root, 0});
  queue.push_back(root);
  while (!queue.empty()) {
    std::uint64_t key = queue.front();
    queue.pop_front();
    auto qa = static_cast<StateId>(key / nb);
    auto qb = static_cast<StateId>(key % nb);
    if (a.is_accepting(qa) != b.is_accepting(qb)) {
      Equivalence result{false, {}};
      for (std::uint64_t k = key; k != root;) {
        const Visit& v = seen.at(k);
        result.witness.push_back(v.symbol);
        k = v.parent;
      }
      std::reverse(result.witness.begin(), result.witness.end());
      return result;
    }
    for (SymbolId s = 0; s < sigma; ++s) {
      std::uint64_t next = std::uint64_t{a.step(qa, s)} * nb + b.step(qb, s);
      if (seen.emplace(next, Visit{key, s}).second) queue.push_back(next);
    }
  }
  return {};
}

std::string export_dfa(const Dfa& dfa, ExportFormat format) {
  const auto& symbols = dfa.alphabet().symbols();
  const std::size_t sigma = symbols.size();
  if (format == ExportFormat::kJson) {
    nlohmann::ordered_json j;
    j["alphabet"] = symbols;
    j["states"] = dfa.num_states();
    j["start"] = dfa.start();
    j["accepting"] = dfa.accepting_states();
    auto rows = nlohmann::ordered_json::array();
    for (StateId q = 0; q < dfa.num_states(); ++q) {
      auto row = nlohmann::ordered_json::array();
      for (SymbolId a = 0; a < sigma; ++a) row.push_back(dfa.step(q, a));
      rows.push_back(std::move(row));
    }
    j["delta"] = std::move(rows);
    return j.dump();
  }

  std::string out = "digraph dfa {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (StateId q = 0; q < dfa.num_states(); ++q) {
    out += "  q" + std::to_string(q) + " [shape=" +
           (dfa.is_accepting(q) ? "doublecircle" : "circle") + "];\n";
  }
  out += "  __start -> q" + std::to_string(dfa.start()) + ";\n";
  // One edge per (source, target) pair, labelled with every symbol taking it.
  for (StateId q = 0; q < dfa.num_states(); ++q) {
    std::map<StateId, std::string> labels;
    for (SymbolId a = 0; a < sigma; ++a) {
      auto& label = labels[dfa.step(q, a)];
      if (!label.empty()) label += ",";
      label += symbols[a];
    }
    for (const auto& [t, label] : labels) {
      out += "  q" + std::to_string(q) + " -> q" + std::to_string(t) + " [label=\"" + label + "\"];\n";
    }
  }
  out += "}\n";
  return out;
}

Dfa import_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("invalid DFA JSON: ") + e.what());
  }
  try {
    Alphabet alphabet(j.at("alphabet").get<std::vector<std::string>>());
    auto n = j.at("states").get<std::size_t>();
    auto start = j.at("start").get<StateId>();
    std::vector<bool> accepting(n, false);
    for (auto q : j.at("accepting").get<std::vector<StateId>>()) {
      if (q >= n) throw ValidationError("accepting state " + std::to_string(q) + " out of range");
      accepting[q] = true;
    }
    const auto& rows = j.at("delta");
    if (!rows.is_array() || rows.size() != n) throw ValidationError("delta must have one row per state");
    std::vector<StateId> delta;
    delta.reserve(n * alphabet.size());
    for (const auto& row : rows) {
      auto r = row.get<std::vector<StateId>>();
      if (r.size() != alphabet.size()) throw ValidationError("delta row must have one entry per symbol");
      delta.insert(delta.end(), r.begin(), r.end());
    }
    return Dfa(std::move(alphabet), n, std::move(delta), start, std::move(accepting));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("invalid DFA JSON: ") + e.what());
  }
}

}  // namespace flc
