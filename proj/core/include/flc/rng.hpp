#pragma once

#include <cstdint>
#include <random>

namespace flc {

/// Portable random stream: std::mt19937_64 (whose output sequence the C++
/// standard fixes) seeded with splitmix64(seed ^ stream), plus hand-written
/// draws because the standard distributions are implementation-defined.
///   uniform01()     = (next() >> 11) * 2^-53
///   uniform_int(n)  = next() % n, redrawing while next() < 2^64 mod n
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(splitmix64(seed ^ splitmix64(stream))) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = n == 0 ? 0 : (0 - n) % n;  // 2^64 mod n
    std::uint64_t x;
    do {
      x = next();
    } while (x < limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  static constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace flc
