#include "flc/builders.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "flc/error.hpp"

namespace flc::builders {

Dfa successive_identical(const Alphabet& alphabet, unsigned k,
                         const std::vector<std::string>& neutral) {
  if (k == 0) throw ValidationError("successive_identical: k must be positive");
  const std::size_t sigma = alphabet.size();
  std::vector<bool> is_neutral(sigma, false);
  for (const auto& name : neutral) is_neutral[alphabet.index_of(name)] = true;

  // State 0: no run. State 1 + s*k + (c-1): run of c copies of symbol s.
  const std::size_t n = 1 + sigma * k;
  auto run_state = [k](SymbolId s, unsigned c) { return static_cast<StateId>(1 + s * k + (c - 1)); };
  std::vector<StateId> delta(n * sigma);
  std::vector<bool> accepting(n, false);
  for (StateId q = 0; q < n; ++q) {
    const bool in_run = q != 0;
    const SymbolId run_symbol = in_run ? (q - 1) / k : 0;
    const unsigned count = in_run ? (q - 1) % k + 1 : 0;
    if (in_run && count == k) accepting[q] = true;
    for (SymbolId a = 0; a < sigma; ++a) {
      StateId next;
      if (is_neutral[a]) {
        next = 0;
      } else if (in_run && a == run_symbol) {
        next = run_state(a, std::min(count + 1, k));
      } else {
        next = run_state(a, 1);
      }
      delta[q * sigma + a] = next;
    }
  }
  return minimize(Dfa(alphabet, n, std::move(delta), 0, std::move(accepting)));
}

Dfa sum_threshold(const Alphabet& alphabet, double increment, unsigned window, double threshold) {
  if (!(increment > 0.0) || !std::isfinite(increment)) {
    throw ValidationError("sum_threshold: increment must be positive");
  }
  if (window == 0) throw ValidationError("sum_threshold: window must be positive");
  if (!std::isfinite(threshold)) throw ValidationError("sum_threshold: threshold must be finite");

  // Accept iff sum(bins) * increment > threshold, i.e. sum(bins) > units.
  double units = threshold / increment;
  if (std::abs(units - std::round(units)) < 1e-9) units = std::round(units);
  const long long min_accepting_sum = static_cast<long long>(std::floor(units)) + 1;

  const std::size_t sigma = alphabet.size();
  // State = (last window-1 bins, whether the last step accepted).
  using Key = std::pair<std::vector<SymbolId>, bool>;
  std::map<Key, StateId> ids;
  std::vector<Key> keys;
  std::vector<StateId> delta;
  auto intern = [&](Key key) {
    auto [it, inserted] = ids.emplace(key, static_cast<StateId>(keys.size()));
    if (inserted) keys.push_back(std::move(key));
    return it->second;
  };
  intern({{}, false});
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (SymbolId a = 0; a < sigma; ++a) {
      std::vector<SymbolId> recent = keys[i].first;
      recent.push_back(a);
      long long sum = std::accumulate(recent.begin(), recent.end(), 0LL);
      bool accept = sum >= min_accepting_sum;
      if (recent.size() >= window) recent.erase(recent.begin());
      delta.push_back(intern({std::move(recent), accept}));
    }
  }
  std::vector<bool> accepting(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) accepting[i] = keys[i].second;
  return minimize(Dfa(alphabet, keys.size(), std::move(delta), 0, std::move(accepting)));
}

Dfa last_token(const Alphabet& alphabet, const std::vector<std::string>& accept) {
  if (accept.empty()) throw ValidationError("last_token: accept set must not be empty");
  const std::size_t sigma = alphabet.size();
  const std::size_t n = sigma + 1;
  std::vector<bool> accepting(n, false);
  for (const auto& name : accept) accepting[alphabet.index_of(name) + 1] = true;
  std::vector<StateId> delta(n * sigma);
  for (StateId q = 0; q < n; ++q) {
    for (SymbolId a = 0; a < sigma; ++a) delta[q * sigma + a] = a + 1;
  }
  return Dfa(alphabet, n, std::move(delta), 0, std::move(accepting));
}

}  // namespace flc::builders
