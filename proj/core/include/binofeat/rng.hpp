#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace binofeat {

// mt19937 output is pinned by the standard, but the std distributions are not;
// these mappings keep every seeded draw reproducible across toolchains.

inline double uniform_double(std::mt19937& rng, double lo, double hi) {
  const double u = static_cast<double>(rng()) * (1.0 / 4294967296.0);  // [0,1)
  return lo + (hi - lo) * u;
}

inline float uniform_float(std::mt19937& rng, float lo, float hi) {
  // 24-bit mantissa so every value is exactly representable.
  const float u = static_cast<float>(rng() >> 8) * (1.0f / 16777216.0f);
  return lo + (hi - lo) * u;
}

// Inclusive on both ends.
inline int uniform_int(std::mt19937& rng, int lo, int hi) {
  const std::uint64_t range = static_cast<std::uint64_t>(hi) - lo + 1;
  const std::uint64_t m = static_cast<std::uint64_t>(rng()) * range;
  return lo + static_cast<int>(m >> 32);
}

// Box-Muller, one value per call (the sine twin is discarded to keep the
// draw count per sample fixed).
inline double normal_double(std::mt19937& rng, double mean = 0.0, double stddev = 1.0) {
  const double u1 = (static_cast<double>(rng()) + 1.0) * (1.0 / 4294967297.0);
  const double u2 = static_cast<double>(rng()) * (1.0 / 4294967296.0);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * M_PI * u2);
}

}  // namespace binofeat
