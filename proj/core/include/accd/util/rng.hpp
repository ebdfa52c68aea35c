#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace accd::util {

using Rng = std::mt19937_64;

/// Unbiased integer in [0, bound). Portable across standard libraries, unlike
/// std::uniform_int_distribution.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Uniform double in [0, 1).
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal via Box-Muller; portable for the same reason as uniform_index.
double standard_normal(Rng& rng);

/// k distinct indices from [0, n) in draw order (partial Fisher-Yates).
std::vector<std::size_t> sample_distinct(Rng& rng, std::size_t n, std::size_t k);

}  // namespace accd::util
