#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace vitalclust {

// Seeded generator with platform-independent draws. The engine is
// std::mt19937_64 (output sequence mandated by the standard); the
// value mappings below are our own so that doubles and integers come
// out identically on every platform, unlike the std:: distributions.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1); safe as a log() argument. 52-bit
  /// resolution: the +0.5 half-step stays exactly representable, so the
  /// endpoints are never produced by rounding.
  double uniform_open01() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return i >= n ? n - 1 : i;
  }

  /// Standard normal via Box-Muller; consumes exactly two engine outputs.
  double normal() {
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  double normal(double mean, double std) { return mean + std * normal(); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Gumbel noise from a fixed hash; lets categorical sampling be keyed to
/// stable identities instead of container positions.
inline double gumbel_from_hash(std::uint64_t h) {
  const double u = (static_cast<double>(h >> 12) + 0.5) * 0x1.0p-52;
  return -std::log(-std::log(u));
}

}  // namespace vitalclust
