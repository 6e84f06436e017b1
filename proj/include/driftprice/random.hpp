#pragma once

// Portable seeded randomness. Only std::mt19937_64 (fully specified by the
// standard) is used; all derived draws are computed here rather than through
// the implementation-defined std:: distributions, so traces are bit-identical
// across standard libraries.

#include <cstdint>
#include <random>
#include <string_view>

namespace driftprice {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// FNV-1a, 64-bit.
inline constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                       std::uint64_t hash = 0xCBF29CE484222325ULL) noexcept {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0,1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t index(std::uint64_t n) {
    // Lemire's multiply-shift with rejection; exact and portable.
    std::uint64_t x = engine_();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = engine_();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace driftprice
