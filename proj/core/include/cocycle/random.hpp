#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cocycle {

/// SplitMix64 finalizer. Used both as a stream generator and as the
/// counter-based hash behind lazily sampled sequences.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_pair(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Small deterministic generator with platform-independent distributions
/// (std distributions are implementation-defined, which breaks byte-identical
/// reports across toolchains).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(mix64(seed ^ 0xa0761d6478bd642fULL)) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() noexcept { return to_unit_interval(next()); }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  std::uint64_t below(std::uint64_t n) noexcept { return n == 0 ? 0 : next() % n; }

  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Independent child stream; stream i of seed s never depends on draw order.
  static Rng stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return Rng(hash_pair(seed, index));
  }

 private:
  std::uint64_t state_;
};

}  // namespace cocycle
