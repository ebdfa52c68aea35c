#include "accd/data/synthetic.hpp"

#include <algorithm>
#include <vector>

#include "accd/error.hpp"
#include "accd/util/rng.hpp"

namespace accd::data {

Dataset gaussian_mixture(const MixtureSpec& spec, std::uint64_t seed) {
  if (spec.n == 0 || spec.d == 0 || spec.components == 0) {
    throw RangeError("gaussian_mixture: n, d and components must be >= 1");
  }
  util::Rng rng(seed);
  std::vector<double> centers(spec.components * spec.d);
  for (double& c : centers) c = util::uniform_unit(rng) * spec.separation;
  std::vector<double> values(spec.n * spec.d);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::size_t c = i % spec.components;
    for (std::size_t j = 0; j < spec.d; ++j) {
      values[i * spec.d + j] = centers[c * spec.d + j] + spec.spread * util::standard_normal(rng);
    }
  }
  return Dataset(spec.n, spec.d, std::move(values));
}

Dataset uniform_points(std::size_t n, std::size_t d, std::uint64_t seed, double lo, double hi) {
  if (n == 0 || d == 0) throw RangeError("uniform_points: n and d must be >= 1");
  util::Rng rng(seed);
  std::vector<double> values(n * d);
  for (double& v : values) v = lo + (hi - lo) * util::uniform_unit(rng);
  return Dataset(n, d, std::move(values));
}

double radius_for_neighbors(const Dataset& points, std::size_t neighbors, std::size_t sample,
                            std::uint64_t seed) {
  const std::size_t n = points.size();
  if (neighbors == 0 || neighbors >= n) throw RangeError("radius_for_neighbors: need 1 <= neighbors < n");
  if (sample == 0) throw RangeError("radius_for_neighbors: sample must be >= 1");
  util::Rng rng(seed);
  const auto picks = util::sample_distinct(rng, n, std::min(sample, n));
  std::vector<double> radii;
  std::vector<double> dist(n - 1);
  for (std::size_t p : picks) {
    std::size_t j = 0;
    for (std::size_t q = 0; q < n; ++q) {
      if (q != p) dist[j++] = detail::raw_distance(points.row(p), points.row(q), MetricSpec{});
    }
    std::nth_element(dist.begin(), dist.begin() + (neighbors - 1), dist.end());
    radii.push_back(dist[neighbors - 1]);
  }
  std::nth_element(radii.begin(), radii.begin() + radii.size() / 2, radii.end());
  return radii[radii.size() / 2];
}

}  // namespace accd::data
