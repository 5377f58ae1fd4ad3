#include "flc/error.hpp"

namespace flc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return "SyntaxError";
    case ErrorCode::kCapacity: return "CapacityError";
    case ErrorCode::kUnknownSymbol: return "UnknownSymbol";
    case ErrorCode::kAlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kIndex: return "IndexError";
    case ErrorCode::kEpisodeDone: return "EpisodeDone";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Error";
}

SyntaxError::SyntaxError(std::size_t position, const std::string& message)
    : Error(ErrorCode::kSyntax,
            "syntax error at position " + std::to_string(position) + ": " + message),
      position_(position),
      message_(message) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(ErrorCode::kParse,
            line == 0 ? message : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

}  // namespace flc
