#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace bandvote {

// Counter-based generator built on the SplitMix64 finalizer.
//
//   output(key, n) = mix(key + 0x9E3779B97F4A7C15 * (n + 1))
//   mix(z): z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;
//           z ^= z >> 27;  z *= 0x94D049BB133111EB;
//           z ^= z >> 31;
//
// Every random decision in this project (synthetic data, k-means++ seeding,
// solver shuffles, gallery/probe splits) is derived from these constants, so
// any implementation that reproduces them reproduces the streams bit-exactly.

inline constexpr std::uint64_t kRngGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t rng_mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t rng_hash(std::uint64_t key, std::uint64_t counter) {
  return rng_mix(key + kRngGamma * (counter + 1));
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  // Independent substream n of this stream.
  CounterRng fork(std::uint64_t n) const { return CounterRng(rng_hash(key_, n)); }

  std::uint64_t next_u64() { return rng_hash(key_, counter_++); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform in [0, n). Plain modulo; the bias is of order n/2^64.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Box-Muller, consumes exactly two counter values per call.
  double next_gaussian() {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_below(i)]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Root stream for a user-facing seed. Distinct `stream` values give
// independent generators for unrelated purposes.
inline CounterRng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return CounterRng(rng_hash(rng_mix(seed), stream));
}

}  // namespace bandvote
