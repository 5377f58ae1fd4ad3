#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flc::kv {

/// One `key = value` line. Quoted values have their quotes removed.
struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Line-oriented `key = value` format shared by .flc and .cfg files. Blank
/// lines and lines starting with `#` are skipped. Throws ParseError.
std::vector<Entry> parse(std::string_view text);

/// `name(key=value, key=[a b], ...)` or a bare `name`.
struct Call {
  std::string name;
  std::vector<std::pair<std::string, std::string>> args;

  std::optional<std::string> find(std::string_view key) const;
  std::string get(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  /// Throws ParseError (with `line`) naming any argument not in `allowed`.
  void expect_only(std::initializer_list<std::string_view> allowed, std::size_t line) const;
  std::size_t line = 0;
};

Call parse_call(std::string_view text, std::size_t line);

/// `[a b c]`, `[a, b]` or a single bare item.
std::vector<std::string> parse_list(std::string_view text);

double to_double(std::string_view text, std::size_t line);
long long to_int(std::string_view text, std::size_t line);
bool to_bool(std::string_view text, std::size_t line);

std::string trim(std::string_view text);

}  // namespace flc::kv
