#pragma once

#include <cstdint>
#include <random>

namespace qwrng {

/// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seeded generator with a platform-independent output sequence: the
/// mt19937_64 recurrence is fixed by the standard, and doubles are formed
/// from the top 53 bits instead of going through std::uniform_real_distribution
/// (whose algorithm is implementation-defined).
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool operator==(const Prng&) const = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace qwrng
