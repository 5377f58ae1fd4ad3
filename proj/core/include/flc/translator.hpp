#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "flc/alphabet.hpp"
#include "flc/kvfile.hpp"

namespace flc {

/// The parts of an environment state the built-in translators look at.
struct StateFeatures {
  std::int64_t index = 0;
  /// Normalized hazard proximity in [0, 1]; 1 means touching a hazard.
  double hazard_distance = 0.0;
  bool contact = false;
};

struct ActionFeatures {
  std::int64_t index = 0;
  /// Scalar actuation for 1D translators (sign / magnitude).
  double value = 0.0;
  /// Grid displacement for 2D translators; (0, 0) is a no-op.
  int dx = 0;
  int dy = 0;
  bool fire = false;
  /// Pre-tokenized action, used by the identity translator.
  std::string token;
};

/// (s_{t-1}, a_t, s_t) as seen by a translation function.
struct Transition {
  StateFeatures prev;
  ActionFeatures action;
  StateFeatures next;
};

enum class TranslatorKind { kSign1D, kDirection2D, kMagnitudeBins, kProximityBins, kIdentity };

const char* to_string(TranslatorKind kind);

/// A stateless translation function bound to an alphabet. Every output symbol
/// is resolved when the binding is created, so translate() can only return
/// symbols of that alphabet.
class Translator {
 public:
  /// Throws ValidationError for unknown kinds or output symbols missing from
  /// the alphabet, ParseError for bad parameters.
  static Translator bind(const kv::Call& call, const Alphabet& alphabet);
  static Translator identity(const Alphabet& alphabet);

  TranslatorKind kind() const noexcept { return kind_; }
  /// Canonical `name(params)` text.
  const std::string& description() const noexcept { return description_; }
  /// direction2d: whether a no-op move has a symbol.
  bool has_noop() const noexcept { return noop_.has_value(); }

  /// Throws DomainError on non-finite numeric inputs or an action the binding
  /// has no symbol for; UnknownSymbol for identity tokens outside Σ.
  SymbolId translate(const Transition& t) const;

 private:
  TranslatorKind kind_ = TranslatorKind::kIdentity;
  std::string description_;
  Alphabet identity_alphabet_;

  // sign1d: left, right, zero, fire (fire optional)
  // direction2d: up right left down upright upleft downright downleft, noop optional
  std::array<SymbolId, 8> directions_{};
  std::optional<SymbolId> noop_;
  SymbolId left_ = 0, right_ = 0, zero_ = 0;
  std::optional<SymbolId> fire_;

  // magnitude_bins / proximity_bins
  double increment_ = 0.2;
  std::vector<SymbolId> bins_;
  SymbolId contact_ = 0;
};

}  // namespace flc
