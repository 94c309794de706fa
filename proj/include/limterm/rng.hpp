#pragma once

#include <cstdint>
#include <random>

namespace limterm {

/// Seeded generator whose draws are identical on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }
  /// Draw in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  bool coin() { return (engine_() & 1U) != 0; }

  /// Independent stream for a named sub-case.
  Rng fork(std::uint64_t salt) const { return Rng{mix(seed_ ^ mix(salt + 0x9e3779b97f4a7c15ULL))}; }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

} // namespace limterm
