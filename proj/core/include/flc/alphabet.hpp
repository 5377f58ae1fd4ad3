#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace flc {

using SymbolId = std::uint32_t;
using StateId = std::uint32_t;
using Word = std::vector<SymbolId>;

/// Ordered set of token names. Symbol indices are positions in the list and
/// never change once constructed.
class Alphabet {
 public:
  Alphabet() = default;
  /// Throws ValidationError on an empty list, duplicates, or names that are
  /// empty or contain whitespace.
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  const std::string& name(SymbolId id) const;

  /// Throws UnknownSymbol.
  SymbolId index_of(std::string_view name) const;
  bool contains(std::string_view name) const;

  Word encode(const std::vector<std::string>& names) const;
  std::vector<std::string> decode(const Word& word) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, SymbolId> index_;
};

}  // namespace flc
