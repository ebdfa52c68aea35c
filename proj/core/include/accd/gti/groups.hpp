#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "accd/data/dataset.hpp"
#include "accd/data/metric.hpp"

namespace accd::gti {

/// Landmark grouping of one point set.
///
/// Invariants: `members` partitions 0..n-1 (groups may be empty when the data has
/// duplicate points); radius[g] == max over members of point_to_landmark;
/// point_to_landmark[p] == d(p, landmark(group_of[p])).
struct GroupModel {
  std::size_t dim = 0;
  std::vector<double> landmarks;                  // z x d
  std::vector<std::vector<std::size_t>> members;  // ascending point indices
  std::vector<double> radius;
  std::vector<double> point_to_landmark;
  std::vector<std::size_t> group_of;
  std::uint64_t grouping_distances = 0;  // spent by the Lloyd passes
  std::uint64_t landmark_distances = 0;  // one per point: d(p, landmark(p))

  std::size_t size() const noexcept { return members.size(); }
  std::size_t points() const noexcept { return group_of.size(); }
  std::span<const double> landmark(std::size_t g) const noexcept {
    return {landmarks.data() + g * dim, dim};
  }
  data::MatrixView landmark_view() const noexcept { return {landmarks, size(), dim}; }
};

inline constexpr std::size_t kGroupingLloydIterations = 5;

/// Seeded Lloyd grouping: z distinct points are sampled as initial landmarks, refined by
/// `lloyd_iterations` assign/mean passes, then every point is assigned to its nearest
/// landmark (ties to the lower landmark index). Throws RangeError unless 1 <= z <= n.
GroupModel build_groups(data::MatrixView points, std::size_t z, const data::MetricSpec& metric,
                        std::uint64_t seed,
                        std::size_t lloyd_iterations = kGroupingLloydIterations);

/// Wraps an explicit membership; landmarks are given, radii and offsets are computed.
GroupModel groups_from_assignment(data::MatrixView points, std::vector<double> landmarks,
                                  std::span<const std::size_t> group_of, std::size_t z,
                                  const data::MetricSpec& metric);

}  // namespace accd::gti
