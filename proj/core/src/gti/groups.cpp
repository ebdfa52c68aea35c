#include "accd/gti/groups.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "accd/data/oracle.hpp"
#include "accd/error.hpp"
#include "accd/util/rng.hpp"

namespace accd::gti {
namespace {

std::vector<std::size_t> assign_nearest(data::MatrixView points, data::MatrixView landmarks,
                                        const data::MetricSpec& metric) {
  std::vector<std::size_t> out(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t g = 0; g < landmarks.rows(); ++g) {
      const double d = data::detail::raw_distance(points.row(i), landmarks.row(g), metric);
      if (d < best) {
        best = d;
        arg = g;
      }
    }
    out[i] = arg;
  }
  return out;
}

}  // namespace

GroupModel groups_from_assignment(data::MatrixView points, std::vector<double> landmarks,
                                  std::span<const std::size_t> group_of, std::size_t z,
                                  const data::MetricSpec& metric) {
  GroupModel gm;
  gm.dim = points.cols();
  gm.landmarks = std::move(landmarks);
  if (gm.landmarks.size() != z * gm.dim) throw SizeMismatch("groups: landmark matrix shape");
  if (group_of.size() != points.rows()) throw SizeMismatch("groups: membership length");
  gm.members.assign(z, {});
  gm.radius.assign(z, 0.0);
  gm.point_to_landmark.assign(points.rows(), 0.0);
  gm.group_of.assign(group_of.begin(), group_of.end());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const std::size_t g = group_of[i];
    if (g >= z) throw RangeError("groups: group index out of range");
    gm.members[g].push_back(i);
    const double d = data::detail::raw_distance(points.row(i), gm.landmark(g), metric);
    gm.point_to_landmark[i] = d;
    gm.radius[g] = std::max(gm.radius[g], d);
  }
  gm.landmark_distances = points.rows();
  data::global_distance_counter().add(points.rows());
  return gm;
}

GroupModel build_groups(data::MatrixView points, std::size_t z, const data::MetricSpec& metric,
                        std::uint64_t seed, std::size_t lloyd_iterations) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  if (z == 0 || z > n) {
    throw RangeError("build_groups: group count " + std::to_string(z) + " outside [1, " +
                     std::to_string(n) + "]");
  }
  metric.check(d);
  util::Rng rng(seed);
  const auto picks = util::sample_distinct(rng, n, z);
  std::vector<double> landmarks(z * d);
  for (std::size_t g = 0; g < z; ++g) {
    const auto r = points.row(picks[g]);
    std::copy(r.begin(), r.end(), landmarks.begin() + static_cast<std::ptrdiff_t>(g * d));
  }
  std::uint64_t spent = 0;
  for (std::size_t it = 0; it < lloyd_iterations; ++it) {
    const auto assign = assign_nearest(points, {landmarks, z, d}, metric);
    spent += static_cast<std::uint64_t>(n) * z;
    std::vector<std::uint32_t> a32(assign.begin(), assign.end());
    landmarks = data::mean_centroids(points, a32, {landmarks, z, d});
  }
  const auto final_assign = assign_nearest(points, {landmarks, z, d}, metric);
  spent += static_cast<std::uint64_t>(n) * z;
  data::global_distance_counter().add(spent);

  GroupModel gm = groups_from_assignment(points, std::move(landmarks), final_assign, z, metric);
  gm.grouping_distances = spent;
  return gm;
}

}  // namespace accd::gti
