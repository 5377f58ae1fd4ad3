#include "flc/translator.hpp"

#include <algorithm>
#include <cmath>

#include "flc/error.hpp"

namespace flc {

const char* to_string(TranslatorKind kind) {
  switch (kind) {
    case TranslatorKind::kSign1D: return "sign1d";
    case TranslatorKind::kDirection2D: return "direction2d";
    case TranslatorKind::kMagnitudeBins: return "magnitude_bins";
    case TranslatorKind::kProximityBins: return "proximity_bins";
    case TranslatorKind::kIdentity: return "identity";
  }
  return "?";
}

namespace {

SymbolId require(const Alphabet& alphabet, const std::string& name, const char* role) {
  if (!alphabet.contains(name)) {
    throw ValidationError(std::string("translator ") + role + " symbol '" + name +
                          "' is not in the alphabet");
  }
  return alphabet.index_of(name);
}

// Direction order follows the ALE action ids 2..9.
constexpr std::array<const char*, 8> kDirectionKeys = {"up",      "right",  "left",      "down",
                                                       "upright", "upleft", "downright", "downleft"};
constexpr std::array<std::pair<int, int>, 8> kDirectionSteps = {
    {{0, -1}, {1, 0}, {-1, 0}, {0, 1}, {1, -1}, {-1, -1}, {1, 1}, {-1, 1}}};

}  // namespace

Translator Translator::identity(const Alphabet& alphabet) {
  Translator t;
  t.kind_ = TranslatorKind::kIdentity;
  t.description_ = "identity";
  t.identity_alphabet_ = alphabet;
  return t;
}

Translator Translator::bind(const kv::Call& call, const Alphabet& alphabet) {
  Translator t;
  const std::size_t line = call.line;
  if (call.name == "identity") {
    call.expect_only({}, line);
    return identity(alphabet);
  }
  if (call.name == "sign1d") {
    call.expect_only({"left", "right", "zero", "fire"}, line);
    t.kind_ = TranslatorKind::kSign1D;
    t.left_ = require(alphabet, call.get("left", "l"), "left");
    t.right_ = require(alphabet, call.get("right", "r"), "right");
    t.zero_ = require(alphabet, call.get("zero", "n"), "zero");
    if (auto fire = call.find("fire")) {
      t.fire_ = require(alphabet, *fire, "fire");
    } else if (alphabet.contains("f")) {
      t.fire_ = alphabet.index_of("f");
    }
    t.description_ = "sign1d(left=" + alphabet.name(t.left_) + ", right=" + alphabet.name(t.right_) +
                     ", zero=" + alphabet.name(t.zero_) +
                     (t.fire_ ? ", fire=" + alphabet.name(*t.fire_) : std::string()) + ")";
    return t;
  }
  if (call.name == "direction2d") {
    call.expect_only({"up", "right", "left", "down", "upright", "upleft", "downright", "downleft", "noop"},
                     line);
    t.kind_ = TranslatorKind::kDirection2D;
    t.description_ = "direction2d(";
    for (std::size_t i = 0; i < 8; ++i) {
      std::string fallback = std::to_string(i + 2);
      t.directions_[i] = require(alphabet, call.get(kDirectionKeys[i], fallback), kDirectionKeys[i]);
      t.description_ += std::string(i ? ", " : "") + kDirectionKeys[i] + "=" + alphabet.name(t.directions_[i]);
    }
    if (auto noop = call.find("noop")) {
      t.noop_ = require(alphabet, *noop, "noop");
    } else if (alphabet.contains("0")) {
      t.noop_ = alphabet.index_of("0");
    }
    if (t.noop_) t.description_ += ", noop=" + alphabet.name(*t.noop_);
    t.description_ += ")";
    return t;
  }
  if (call.name == "magnitude_bins") {
    call.expect_only({"increment", "cap", "prefix"}, line);
    t.kind_ = TranslatorKind::kMagnitudeBins;
    t.increment_ = call.get_double("increment", 0.2);
    long long cap = call.get_int("cap", 8);
    std::string prefix = call.get("prefix", "m");
    if (!(t.increment_ > 0.0)) throw ParseError(line, "magnitude_bins: increment must be positive");
    if (cap < 0) throw ParseError(line, "magnitude_bins: cap must be non-negative");
    for (long long k = 0; k <= cap; ++k) {
      t.bins_.push_back(require(alphabet, prefix + std::to_string(k), "bin"));
    }
    t.description_ = "magnitude_bins(increment=" + kv::trim(call.get("increment", "0.2")) +
                     ", cap=" + std::to_string(cap) + ", prefix=" + prefix + ")";
    return t;
  }
  if (call.name == "proximity_bins") {
    call.expect_only({"levels", "prefix", "contact"}, line);
    t.kind_ = TranslatorKind::kProximityBins;
    long long levels = call.get_int("levels", 10);
    if (levels < 1) throw ParseError(line, "proximity_bins: levels must be positive");
    std::string prefix = call.get("prefix", "d");
    for (long long k = 0; k < levels; ++k) {
      t.bins_.push_back(require(alphabet, prefix + std::to_string(k), "level"));
    }
    t.contact_ = require(alphabet, call.get("contact", "contact"), "contact");
    t.description_ = "proximity_bins(levels=" + std::to_string(levels) + ", prefix=" + prefix +
                     ", contact=" + alphabet.name(t.contact_) + ")";
    return t;
  }
  throw ValidationError("unknown translator kind '" + call.name + "'");
}

SymbolId Translator::translate(const Transition& tr) const {
  switch (kind_) {
    case TranslatorKind::kIdentity:
      return identity_alphabet_.index_of(tr.action.token);
    case TranslatorKind::kSign1D: {
      const double a = tr.action.value;
      if (!std::isfinite(a)) throw DomainError("sign1d: non-finite action");
      if (tr.action.fire && fire_) return *fire_;
      if (a < 0.0) return left_;
      if (a > 0.0) return right_;
      return zero_;
    }
    case TranslatorKind::kDirection2D: {
      const int dx = tr.action.dx;
      const int dy = tr.action.dy;
      if (dx == 0 && dy == 0) {
        if (!noop_) throw DomainError("direction2d: no symbol bound for the no-op action");
        return *noop_;
      }
      for (std::size_t i = 0; i < kDirectionSteps.size(); ++i) {
        if (kDirectionSteps[i].first == dx && kDirectionSteps[i].second == dy) return directions_[i];
      }
      throw DomainError("direction2d: displacement is not a unit grid move");
    }
    case TranslatorKind::kMagnitudeBins: {
      const double a = tr.action.value;
      if (!std::isfinite(a)) throw DomainError("magnitude_bins: non-finite action");
      // The small slack keeps exact multiples (0.6 / 0.2) in the expected bin.
      double bin = std::floor(std::abs(a) / increment_ + 1e-9);
      const auto cap = static_cast<double>(bins_.size() - 1);
      return bins_[static_cast<std::size_t>(std::min(bin, cap))];
    }
    case TranslatorKind::kProximityBins: {
      if (tr.next.contact) return contact_;
      const double d = tr.next.hazard_distance;
      if (!std::isfinite(d)) throw DomainError("proximity_bins: non-finite distance");
      const auto levels = static_cast<double>(bins_.size());
      double bin = std::floor(std::clamp(d, 0.0, 1.0) * levels);
      return bins_[static_cast<std::size_t>(std::min(bin, levels - 1))];
    }
  }
  throw DomainError("unbound translator");
}

}  // namespace flc
