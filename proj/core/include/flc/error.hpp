#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flc {

enum class ErrorCode {
  kSyntax = 1,
  kCapacity,
  kUnknownSymbol,
  kAlphabetMismatch,
  kParse,
  kValidation,
  kDomain,
  kIndex,
  kEpisodeDone,
  kConfig,
};

const char* to_string(ErrorCode code);

/// Base of every error raised by the library. The code is stable and is what
/// foreign-language bindings surface to their callers.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Regex syntax error; position is a 0-based offset into the pattern text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message);
  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t position_;
  std::string message_;
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what)
      : Error(ErrorCode::kCapacity, what) {}
};

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(const std::string& symbol)
      : Error(ErrorCode::kUnknownSymbol, "unknown symbol '" + symbol + "'"),
        symbol_(symbol) {}
  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string symbol_;
};

class AlphabetMismatch : public Error {
 public:
  explicit AlphabetMismatch(const std::string& what)
      : Error(ErrorCode::kAlphabetMismatch, what) {}
};

/// Malformed spec/config file; line is 1-based (0 when not tied to a line).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::kValidation, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::kDomain, what) {}
};

class IndexError : public Error {
 public:
  explicit IndexError(const std::string& what)
      : Error(ErrorCode::kIndex, what) {}
};

class EpisodeDone : public Error {
 public:
  EpisodeDone() : Error(ErrorCode::kEpisodeDone, "step called after episode termination") {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCode::kConfig, what) {}
};

}  // namespace flc
