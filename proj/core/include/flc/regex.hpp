#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "flc/alphabet.hpp"

namespace flc {

/// Regex syntax tree over a declared alphabet.
///
/// Concrete syntax: tokens are separated by whitespace and juxtaposition is
/// concatenation, so multi-character token names work (`d9 contact`). Postfix
/// operators `*`, `+`, `?`, `{n}`; infix `|`; `.` matches any one symbol;
/// parentheses group. Groups may abut without whitespace: `(l r)(r l)`.
struct RegexAst {
  enum class Kind { kEmpty, kEpsilon, kSym, kDot, kConcat, kAlt, kStar, kPlus, kOpt, kRepeat };

  Kind kind = Kind::kEmpty;
  SymbolId symbol = 0;       // kSym
  unsigned count = 0;        // kRepeat
  std::vector<RegexAst> children;

  static RegexAst empty() { return {}; }
  static RegexAst epsilon() { return {Kind::kEpsilon, 0, 0, {}}; }
  static RegexAst sym(SymbolId s) { return {Kind::kSym, s, 0, {}}; }
  static RegexAst dot() { return {Kind::kDot, 0, 0, {}}; }
  static RegexAst concat(std::vector<RegexAst> parts) { return {Kind::kConcat, 0, 0, std::move(parts)}; }
  static RegexAst alt(std::vector<RegexAst> parts) { return {Kind::kAlt, 0, 0, std::move(parts)}; }
  static RegexAst star(RegexAst child) { return {Kind::kStar, 0, 0, {std::move(child)}}; }
  static RegexAst plus(RegexAst child) { return {Kind::kPlus, 0, 0, {std::move(child)}}; }
  static RegexAst opt(RegexAst child) { return {Kind::kOpt, 0, 0, {std::move(child)}}; }
  /// Throws SyntaxError(0, ...) when n == 0.
  static RegexAst repeat(RegexAst child, unsigned n);

  bool operator==(const RegexAst&) const = default;
};

/// Throws SyntaxError for unbalanced parentheses, unknown symbols, empty
/// alternation branches, and `{0}`.
RegexAst parse_regex(std::string_view text, const Alphabet& alphabet);

/// Renders the tree back to concrete syntax (fully parenthesized where needed).
std::string to_string(const RegexAst& ast, const Alphabet& alphabet);

}  // namespace flc
