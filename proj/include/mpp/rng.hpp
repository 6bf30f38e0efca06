#pragma once

#include <cstdint>

namespace mpp {

/// Deterministic 64-bit generator (splitmix64). Used wherever distributed
/// agents must derive identical random choices from a shared seed, so the
/// sequence has to be reproducible across processes and platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform draw from [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    // Multiply-shift reduction; bias is negligible for the small bounds
    // used here and the result is platform-independent.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Order-sensitive seed mixing, boost::hash_combine style.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
  return seed;
}

}  // namespace mpp
