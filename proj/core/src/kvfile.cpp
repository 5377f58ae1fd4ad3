#include "flc/kvfile.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "flc/error.hpp"

namespace flc::kv {

std::string trim(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

std::vector<Entry> parse(std::string_view text) {
  std::vector<Entry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    Entry entry{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)),
                line_no};
    if (entry.key.empty()) throw ParseError(line_no, "missing key");
    for (char c : entry.key) {
      if (std::isspace(static_cast<unsigned char>(c))) throw ParseError(line_no, "key contains whitespace");
    }
    if (entry.value.size() >= 2 && entry.value.front() == '"') {
      if (entry.value.back() != '"') throw ParseError(line_no, "unterminated quoted value");
      entry.value = entry.value.substr(1, entry.value.size() - 2);
    } else if (!entry.value.empty() && entry.value.front() == '"') {
      throw ParseError(line_no, "unterminated quoted value");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::optional<std::string> Call::find(std::string_view key) const {
  for (const auto& [k, v] : args) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string Call::get(std::string_view key, std::string fallback) const {
  auto v = find(key);
  return v ? *v : std::move(fallback);
}

double Call::get_double(std::string_view key, double fallback) const {
  auto v = find(key);
  return v ? to_double(*v, line) : fallback;
}

long long Call::get_int(std::string_view key, long long fallback) const {
  auto v = find(key);
  return v ? to_int(*v, line) : fallback;
}

void Call::expect_only(std::initializer_list<std::string_view> allowed, std::size_t at) const {
  for (const auto& [k, v] : args) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == k;
    if (!ok) throw ParseError(at, "unknown parameter '" + k + "' for '" + name + "'");
  }
}

Call parse_call(std::string_view text, std::size_t line) {
  Call call;
  call.line = line;
  std::string t = trim(text);
  std::size_t open = t.find('(');
  if (open == std::string::npos) {
    call.name = t;
  } else {
    if (t.back() != ')') throw ParseError(line, "expected ')' at end of '" + t + "'");
    call.name = trim(std::string_view(t).substr(0, open));
    std::string inner = t.substr(open + 1, t.size() - open - 2);
    // Split on commas outside brackets.
    std::vector<std::string> parts;
    std::string current;
    int depth = 0;
    for (char c : inner) {
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == ',' && depth == 0) {
        parts.push_back(current);
        current.clear();
      } else {
        current += c;
      }
    }
    if (depth != 0) throw ParseError(line, "unbalanced '[' in '" + t + "'");
    if (!trim(current).empty() || !parts.empty()) parts.push_back(current);
    for (const auto& part : parts) {
      std::size_t eq = part.find('=');
      if (eq == std::string::npos) throw ParseError(line, "expected key=value in '" + trim(part) + "'");
      std::string key = trim(std::string_view(part).substr(0, eq));
      std::string value = trim(std::string_view(part).substr(eq + 1));
      if (key.empty() || value.empty()) throw ParseError(line, "empty parameter in '" + t + "'");
      call.args.emplace_back(std::move(key), std::move(value));
    }
  }
  if (call.name.empty()) throw ParseError(line, "missing name");
  for (char c : call.name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) {
      throw ParseError(line, "invalid name '" + call.name + "'");
    }
  }
  return call;
}

std::vector<std::string> parse_list(std::string_view text) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw ParseError(0, "unterminated list '" + t + "'");
    t = t.substr(1, t.size() - 2);
  }
  std::vector<std::string> items;
  std::string current;
  for (char c : t) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!current.empty()) items.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) items.push_back(std::move(current));
  return items;
}

double to_double(std::string_view text, std::size_t line) {
  std::string t = trim(text);
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw ParseError(line, "expected a number, got '" + t + "'");
  }
  return v;
}

long long to_int(std::string_view text, std::size_t line) {
  std::string t = trim(text);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParseError(line, "expected an integer, got '" + t + "'");
  }
  return v;
}

bool to_bool(std::string_view text, std::size_t line) {
  std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ParseError(line, "expected a boolean, got '" + t + "'");
}

}  // namespace flc::kv
