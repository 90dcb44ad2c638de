#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace aifstream {

/// splitmix64 mixing step; used to derive independent stream seeds from a
/// base seed plus arbitrary tags. Stable across platforms.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(a) ^ (b + 0x9e3779b97f4a7c15ull));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

/// Seeded random stream with portable draw semantics. std::mt19937_64 has a
/// standard-mandated sequence; uniform and normal draws below avoid the
/// implementation-defined distribution adaptors so that identical seeds give
/// identical streams on any platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n); n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller (two uniforms per draw, no caching).
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  /// Normal(mean, stddev) truncated at zero by rejection; falls back to a
  /// clamp after a bounded number of attempts so the draw always terminates.
  double truncated_normal(double mean, double stddev) {
    if (stddev <= 0.0) return mean < 0.0 ? 0.0 : mean;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double x = mean + stddev * normal();
      if (x >= 0.0) return x;
    }
    return 0.0;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace aifstream
