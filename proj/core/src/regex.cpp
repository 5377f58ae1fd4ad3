#include "flc/regex.hpp"

#include <cctype>
#include <charconv>

#include "flc/error.hpp"

namespace flc {

RegexAst RegexAst::repeat(RegexAst child, unsigned n) {
  if (n == 0) throw SyntaxError(0, "repetition count must be positive");
  return {Kind::kRepeat, 0, n, {std::move(child)}};
}

namespace {

bool is_operator(char c) {
  switch (c) {
    case '|': case '*': case '+': case '?': case '{': case '}': case '(': case ')': case '.':
      return true;
    default:
      return false;
  }
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Recursive descent:
//   alt    := concat ('|' concat)*
//   concat := postfix+
//   postfix:= atom ('*' | '+' | '?' | '{' n '}')*
//   atom   := symbol | '.' | '(' alt ')'
class Parser {
 public:
  Parser(std::string_view text, const Alphabet& alphabet) : text_(text), alphabet_(alphabet) {}

  RegexAst parse() {
    RegexAst ast = parse_alt();
    skip_space();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') throw SyntaxError(pos_, "unbalanced ')'");
      throw SyntaxError(pos_, "unexpected character '" + std::string(1, text_[pos_]) + "'");
    }
    return ast;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  RegexAst parse_alt() {
    std::vector<RegexAst> branches;
    branches.push_back(parse_concat());
    while (!at_end() && text_[pos_] == '|') {
      ++pos_;
      branches.push_back(parse_concat());
    }
    if (branches.size() == 1) return std::move(branches.front());
    return RegexAst::alt(std::move(branches));
  }

  RegexAst parse_concat() {
    std::vector<RegexAst> parts;
    while (!at_end()) {
      char c = text_[pos_];
      if (c == '|' || c == ')') break;
      parts.push_back(parse_postfix());
    }
    if (parts.empty()) throw SyntaxError(pos_, "empty alternation branch");
    if (parts.size() == 1) return std::move(parts.front());
    return RegexAst::concat(std::move(parts));
  }

  RegexAst parse_postfix() {
    RegexAst node = parse_atom();
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '*') {
        node = RegexAst::star(std::move(node));
      } else if (c == '+') {
        node = RegexAst::plus(std::move(node));
      } else if (c == '?') {
        node = RegexAst::opt(std::move(node));
      } else if (c == '{') {
        std::size_t open = pos_;
        std::size_t close = text_.find('}', open);
        if (close == std::string_view::npos) throw SyntaxError(open, "unterminated '{'");
        std::string_view digits = text_.substr(open + 1, close - open - 1);
        unsigned n = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
          throw SyntaxError(open + 1, "expected repetition count");
        }
        if (n == 0) throw SyntaxError(open + 1, "repetition count must be positive");
        node = RegexAst::repeat(std::move(node), n);
        pos_ = close;
      } else {
        break;
      }
      ++pos_;
    }
    return node;
  }

  RegexAst parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of pattern");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RegexAst inner = parse_alt();
      if (at_end() || text_[pos_] != ')') throw SyntaxError(pos_, "expected ')'");
      ++pos_;
      return inner;
    }
    if (c == '.') {
      ++pos_;
      return RegexAst::dot();
    }
    if (is_operator(c)) {
      throw SyntaxError(pos_, "unexpected '" + std::string(1, c) + "'");
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_]) && !is_operator(text_[pos_])) ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    if (!alphabet_.contains(name)) {
      throw SyntaxError(start, "unknown symbol '" + std::string(name) + "'");
    }
    return RegexAst::sym(alphabet_.index_of(name));
  }

  std::string_view text_;
  const Alphabet& alphabet_;
  std::size_t pos_ = 0;
};

int precedence(RegexAst::Kind k) {
  switch (k) {
    case RegexAst::Kind::kAlt: return 0;
    case RegexAst::Kind::kConcat: return 1;
    case RegexAst::Kind::kStar:
    case RegexAst::Kind::kPlus:
    case RegexAst::Kind::kOpt:
    case RegexAst::Kind::kRepeat: return 2;
    default: return 3;
  }
}

void render(const RegexAst& ast, const Alphabet& alphabet, std::string& out, int parent_prec) {
  using K = RegexAst::Kind;
  bool paren = precedence(ast.kind) < parent_prec;
  if (paren) out += '(';
  switch (ast.kind) {
    case K::kEmpty: out += "[]"; break;
    case K::kEpsilon: out += "()"; break;
    case K::kSym: out += alphabet.name(ast.symbol); break;
    case K::kDot: out += '.'; break;
    case K::kConcat:
      for (std::size_t i = 0; i < ast.children.size(); ++i) {
        if (i) out += ' ';
        render(ast.children[i], alphabet, out, 2);
      }
      break;
    case K::kAlt:
      for (std::size_t i = 0; i < ast.children.size(); ++i) {
        if (i) out += '|';
        render(ast.children[i], alphabet, out, 1);
      }
      break;
    case K::kStar: render(ast.children[0], alphabet, out, 3); out += '*'; break;
    case K::kPlus: render(ast.children[0], alphabet, out, 3); out += '+'; break;
    case K::kOpt: render(ast.children[0], alphabet, out, 3); out += '?'; break;
    case K::kRepeat:
      render(ast.children[0], alphabet, out, 3);
      out += '{' + std::to_string(ast.count) + '}';
      break;
  }
  if (paren) out += ')';
}

}  // namespace

RegexAst parse_regex(std::string_view text, const Alphabet& alphabet) {
  return Parser(text, alphabet).parse();
}

std::string to_string(const RegexAst& ast, const Alphabet& alphabet) {
  std::string out;
  render(ast, alphabet, out, 0);
  return out;
}

}  // namespace flc
