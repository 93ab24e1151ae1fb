#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mammoscope {

/// Reproducible generator shared by phantom synthesis and fold shuffling.
///
/// State: 64-bit LCG, x' = 6364136223846793005 * x + 1442695040888963407 (mod 2^64).
/// The initial state is splitmix64(seed) so that adjacent seeds give unrelated streams.
/// uniform() = (x >> 11) * 2^-53 in [0, 1); normal() is Box-Muller using the cosine branch only.
class Lcg64 {
 public:
  using Engine = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0ULL>;

  explicit Lcg64(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  static std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  Engine engine_;
};

}  // namespace mammoscope
