#pragma once

#include <cstdint>
#include <random>

#include "spcv/vec3.hpp"

namespace spcv {

// std::mt19937_64 has a fully pinned output sequence; the distributions below are
// hand-rolled so draws do not depend on the standard library's (unspecified)
// distribution implementations.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  // 53 random mantissa bits in [0, 1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [0, n). Modulo bias is irrelevant at the scales used here.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) { return rng() % n; }

inline Vec3 uniform_vec3(Rng& rng, double lo, double hi) {
  const double x = uniform(rng, lo, hi);
  const double y = uniform(rng, lo, hi);
  const double z = uniform(rng, lo, hi);
  return {x, y, z};
}

inline double normal01(Rng& rng) {
  // Box-Muller; pinned to the mt19937_64 stream.
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace spcv
