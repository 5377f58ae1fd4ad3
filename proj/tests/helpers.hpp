// Test-only reference implementations. Nothing here calls the automaton
// construction code, so agreement with it is meaningful.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flc/alphabet.hpp"
#include "flc/dfa.hpp"

namespace flc::testing {

using Predicate = std::function<bool(std::span<const SymbolId>)>;

inline std::span<const SymbolId> tail(std::span<const SymbolId> w, std::size_t k) {
  return w.size() < k ? w : w.subspan(w.size() - k);
}

inline bool ends_with(std::span<const SymbolId> w, const std::vector<SymbolId>& suffix) {
  if (w.size() < suffix.size()) return false;
  return std::equal(suffix.begin(), suffix.end(), w.end() - static_cast<std::ptrdiff_t>(suffix.size()));
}

// Alphabet {n f l r}: l = 2, r = 3.
inline bool dithering_1d(std::span<const SymbolId> w) {
  return ends_with(w, {2, 3, 2, 3}) || ends_with(w, {3, 2, 3, 2});
}

inline bool overactuation_1d(std::span<const SymbolId> w) {
  if (w.size() < 4) return false;
  auto t = tail(w, 4);
  return std::all_of(t.begin(), t.end(), [](SymbolId s) { return s == 2; }) ||
         std::all_of(t.begin(), t.end(), [](SymbolId s) { return s == 3; });
}

// Move alphabet {2..9} as symbol ids 0..7; y grows downward.
inline std::pair<int, int> move_of(SymbolId s) {
  static constexpr std::array<std::pair<int, int>, 8> kMoves{
      {{0, -1}, {1, 0}, {-1, 0}, {0, 1}, {1, -1}, {-1, -1}, {1, 1}, {-1, 1}}};
  return kMoves.at(s);
}

inline bool overactuation_2d(std::span<const SymbolId> w) {
  if (w.size() < 4) return false;
  auto t = tail(w, 4);
  auto all = [&](auto pred) { return std::all_of(t.begin(), t.end(), [&](SymbolId s) { return pred(move_of(s)); }); };
  return all([](auto m) { return m.first < 0; }) || all([](auto m) { return m.first > 0; }) ||
         all([](auto m) { return m.second < 0; }) || all([](auto m) { return m.second > 0; });
}

// Some suffix of two to four moves with zero net displacement.
inline bool dithering_2d(std::span<const SymbolId> w) {
  int dx = 0, dy = 0;
  for (std::size_t k = 1; k <= 4 && k <= w.size(); ++k) {
    auto [x, y] = move_of(w[w.size() - k]);
    dx += x;
    dy += y;
    if (k >= 2 && dx == 0 && dy == 0) return true;
  }
  return false;
}

// {z L R}: three identical non-z tokens at the end.
inline bool paddle_ball(std::span<const SymbolId> w) {
  if (w.size() < 3) return false;
  auto t = tail(w, 3);
  return t[0] != 0 && t[0] == t[1] && t[1] == t[2];
}

// m0..m8 stand for 0..8 increments of 0.2; threshold 4.0 is 20 increments.
inline bool actuation_sum(std::span<const SymbolId> w) {
  unsigned sum = 0;
  for (SymbolId s : tail(w, 3)) sum += s;
  return sum > 20;
}

// DFA whose states are the last m symbols read (or the whole word while it is
// shorter), accepting where `pred` holds on that window. Correct for any
// language decided by the last m symbols.
inline Dfa window_dfa(const Alphabet& alphabet, std::size_t m, const Predicate& pred) {
  const std::size_t k = alphabet.size();
  std::map<Word, StateId> ids;
  std::vector<Word> words;
  auto id_of = [&](const Word& w) {
    auto [it, inserted] = ids.emplace(w, static_cast<StateId>(words.size()));
    if (inserted) words.push_back(w);
    return it->second;
  };
  id_of({});
  std::vector<StateId> delta;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (SymbolId a = 0; a < k; ++a) {
      Word next = words[i];
      next.push_back(a);
      if (next.size() > m) next.erase(next.begin());
      delta.push_back(id_of(next));
    }
  }
  std::vector<bool> accepting;
  for (const auto& w : words) accepting.push_back(pred(w));
  return Dfa(alphabet, words.size(), std::move(delta), 0, std::move(accepting));
}

// Number of Myhill-Nerode classes of a language, told apart by membership of
// every continuation up to `suffix_len`, over representatives up to `prefix_len`.
inline std::size_t nerode_classes(std::size_t k, std::size_t prefix_len, std::size_t suffix_len,
                                  const Predicate& pred) {
  auto all_words = [k](std::size_t max_len) {
    std::vector<Word> out{{}};
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i].size() == max_len) continue;
      for (SymbolId a = 0; a < k; ++a) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(w);
      }
    }
    return out;
  };
  const auto prefixes = all_words(prefix_len);
  const auto suffixes = all_words(suffix_len);
  std::map<std::vector<bool>, int> signatures;
  for (const auto& p : prefixes) {
    std::vector<bool> sig;
    for (const auto& s : suffixes) {
      Word w = p;
      w.insert(w.end(), s.begin(), s.end());
      sig.push_back(pred(w));
    }
    signatures.emplace(std::move(sig), 0);
  }
  return signatures.size();
}

}  // namespace flc::testing
