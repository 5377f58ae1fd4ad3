#include "flc/oracle.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "flc/error.hpp"
#include "flc/kvfile.hpp"
#include "flc/rng.hpp"

namespace flc {

namespace {

using Positions = std::vector<char>;

Positions ends(const RegexAst& node, std::span<const SymbolId> w, const Positions& from);

Positions closure(const RegexAst& child, std::span<const SymbolId> w, Positions reached) {
  Positions frontier = reached;
  while (true) {
    Positions next = ends(child, w, frontier);
    bool grew = false;
    for (std::size_t i = 0; i < next.size(); ++i) {
      frontier[i] = 0;
      if (next[i] && !reached[i]) {
        reached[i] = frontier[i] = 1;
        grew = true;
      }
    }
    if (!grew) return reached;
  }
}

Positions ends(const RegexAst& node, std::span<const SymbolId> w, const Positions& from) {
  using K = RegexAst::Kind;
  const std::size_t n = w.size();
  Positions out(n + 1, 0);
  switch (node.kind) {
    case K::kEmpty: return out;
    case K::kEpsilon: return from;
    case K::kSym:
    case K::kDot:
      for (std::size_t i = 0; i < n; ++i) {
        if (from[i] && (node.kind == K::kDot || w[i] == node.symbol)) out[i + 1] = 1;
      }
      return out;
    case K::kConcat: {
      Positions cur = from;
      for (const auto& c : node.children) cur = ends(c, w, cur);
      return cur;
    }
    case K::kAlt:
      for (const auto& c : node.children) {
        Positions part = ends(c, w, from);
        for (std::size_t i = 0; i <= n; ++i) out[i] |= part[i];
      }
      return out;
    case K::kStar: return closure(node.children.front(), w, from);
    case K::kPlus: return closure(node.children.front(), w, ends(node.children.front(), w, from));
    case K::kOpt: {
      out = ends(node.children.front(), w, from);
      for (std::size_t i = 0; i <= n; ++i) out[i] |= from[i];
      return out;
    }
    case K::kRepeat: {
      Positions cur = from;
      for (unsigned r = 0; r < node.count; ++r) cur = ends(node.children.front(), w, cur);
      return cur;
    }
  }
  return out;
}

}  // namespace

bool regex_matches(const RegexAst& ast, std::span<const SymbolId> word) {
  Positions start(word.size() + 1, 0);
  start[0] = 1;
  return ends(ast, word, start)[word.size()] != 0;
}

LanguagePredicate reference_predicate(const ConstraintSpec& spec) {
  const Alphabet& sigma = spec.alphabet;
  if (!spec.from_builder) {
    if (spec.reset_heuristic) {
      throw ValidationError("constraint '" + spec.name + "' uses the reset heuristic; its language is not the regex's");
    }
    auto ast = std::make_shared<RegexAst>(parse_regex(spec.source, sigma));
    return [ast](std::span<const SymbolId> w) { return regex_matches(*ast, w); };
  }

  const kv::Call call = kv::parse_call(spec.source, 0);
  if (call.name == "successive_identical") {
    const auto k = static_cast<std::size_t>(call.get_int("k", 3));
    std::vector<char> neutral(sigma.size(), 0);
    if (auto n = call.find("neutral")) {
      for (const auto& s : kv::parse_list(*n)) neutral[sigma.index_of(s)] = 1;
    }
    return [k, neutral](std::span<const SymbolId> w) {
      if (w.size() < k) return false;
      const SymbolId last = w.back();
      if (neutral[last]) return false;
      for (std::size_t i = w.size() - k; i < w.size(); ++i) {
        if (w[i] != last) return false;
      }
      return true;
    };
  }
  if (call.name == "sum_threshold") {
    const double increment = call.get_double("increment", 0.2);
    const auto window = static_cast<std::size_t>(call.get_int("window", 3));
    const double threshold = call.get_double("threshold", 4.0);
    // Sum of bins against threshold / increment, snapping near-integer ratios.
    double units = threshold / increment;
    if (std::abs(units - std::round(units)) < 1e-9) units = std::round(units);
    return [window, units](std::span<const SymbolId> w) {
      long long sum = 0;
      const std::size_t from = w.size() > window ? w.size() - window : 0;
      for (std::size_t i = from; i < w.size(); ++i) sum += w[i];
      return !w.empty() && static_cast<double>(sum) > units;
    };
  }
  if (call.name == "last_token") {
    std::vector<char> accept(sigma.size(), 0);
    if (auto a = call.find("accept")) {
      for (const auto& s : kv::parse_list(*a)) accept[sigma.index_of(s)] = 1;
    }
    return [accept](std::span<const SymbolId> w) { return !w.empty() && accept[w.back()]; };
  }
  throw ValidationError("no reference predicate for builder '" + call.name + "'");
}

OracleReport check_against_oracle(const ConstraintSpec& spec, std::size_t max_len, std::size_t exhaustive_limit,
                                  std::size_t samples, std::uint64_t seed) {
  const LanguagePredicate reference = reference_predicate(spec);
  const Dfa& dfa = *spec.dfa;
  const std::size_t k = spec.alphabet.size();

  // Number of words of length <= max_len, saturating at the limit.
  std::size_t total = 0;
  std::size_t layer = 1;
  for (std::size_t len = 0; len <= max_len; ++len) {
    total += layer;
    if (total > exhaustive_limit) break;
    if (len < max_len) {
      if (layer > exhaustive_limit / k + 1) {
        total = exhaustive_limit + 1;
        break;
      }
      layer *= k;
    }
  }

  OracleReport report;
  const auto check = [&](const Word& w) {
    ++report.words_checked;
    if (dfa.accepts(w) != reference(w)) {
      report.agree = false;
      report.counterexample = w;
      return false;
    }
    return true;
  };

  if (total <= exhaustive_limit) {
    for (std::size_t len = 0; len <= max_len; ++len) {
      Word w(len, 0);
      while (true) {
        if (!check(w)) return report;
        std::size_t i = len;
        while (i > 0 && w[i - 1] + 1 == k) w[--i] = 0;
        if (i == 0) break;
        ++w[i - 1];
      }
    }
    return report;
  }

  report.exhaustive = false;
  Rng rng(seed, 0x0c1e);
  for (std::size_t s = 0; s < samples; ++s) {
    Word w(rng.uniform_int(max_len + 1));
    for (auto& x : w) x = static_cast<SymbolId>(rng.uniform_int(k));
    if (!check(w)) return report;
  }
  return report;
}

}  // namespace flc
