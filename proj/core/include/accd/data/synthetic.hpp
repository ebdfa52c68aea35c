#pragma once

#include <cstddef>
#include <cstdint>

#include "accd/data/dataset.hpp"
#include "accd/data/metric.hpp"

namespace accd::data {

struct MixtureSpec {
  std::size_t n = 1000;
  std::size_t d = 2;
  std::size_t components = 4;
  double spread = 1.0;       // standard deviation of each component
  double separation = 10.0;  // centers drawn uniformly from [0, separation)^d
};

/// Gaussian mixture; component of point i is i % components.
Dataset gaussian_mixture(const MixtureSpec& spec, std::uint64_t seed);

/// Uniform points in [lo, hi)^d.
Dataset uniform_points(std::size_t n, std::size_t d, std::uint64_t seed, double lo = 0.0,
                       double hi = 1.0);

/// Radius giving roughly `neighbors` other points per ball: the median, over `sample`
/// seeded points, of the distance to their neighbors-th nearest other point. Uncounted.
double radius_for_neighbors(const Dataset& points, std::size_t neighbors, std::size_t sample,
                            std::uint64_t seed);

}  // namespace accd::data
