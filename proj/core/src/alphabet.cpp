#include "flc/alphabet.hpp"

#include <cctype>

#include "flc/error.hpp"

namespace flc {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ValidationError("alphabet must not be empty");
  for (SymbolId i = 0; i < symbols_.size(); ++i) {
    const auto& s = symbols_[i];
    if (s.empty()) throw ValidationError("alphabet symbol must not be empty");
    for (unsigned char c : s) {
      if (std::isspace(c)) throw ValidationError("alphabet symbol '" + s + "' contains whitespace");
    }
    if (!index_.emplace(s, i).second) {
      throw ValidationError("duplicate alphabet symbol '" + s + "'");
    }
  }
}

const std::string& Alphabet::name(SymbolId id) const {
  if (id >= symbols_.size()) throw UnknownSymbol("#" + std::to_string(id));
  return symbols_[id];
}

SymbolId Alphabet::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw UnknownSymbol(std::string(name));
  return it->second;
}

bool Alphabet::contains(std::string_view name) const {
  return index_.count(std::string(name)) != 0;
}

Word Alphabet::encode(const std::vector<std::string>& names) const {
  Word word;
  word.reserve(names.size());
  for (const auto& n : names) word.push_back(index_of(n));
  return word;
}

std::vector<std::string> Alphabet::decode(const Word& word) const {
  std::vector<std::string> out;
  out.reserve(word.size());
  for (SymbolId id : word) out.push_back(name(id));
  return out;
}

}  // namespace flc
