#pragma once

#include <cstdint>
#include <string_view>

// Stable 64-bit hashing used everywhere a derived seed is needed
// (restart seeds, bootstrap resample seeds, per-patient priorities).
// Both functions are fixed for the life of the on-disk formats: outputs
// must not change across platforms or releases.

namespace vitalclust {

/// splitmix64 finalizer over seed combined with a stream index.
inline std::uint64_t hash64(std::uint64_t seed, std::uint64_t n) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (n + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// FNV-1a over bytes; used to key randomness to patient ids and to
/// fingerprint output files in the run manifest.
inline std::uint64_t hash64_str(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace vitalclust
