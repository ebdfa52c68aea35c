#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "accd/data/dataset.hpp"
#include "accd/data/metric.hpp"
#include "accd/data/topk.hpp"

// Brute-force reference implementations for each pipeline. They share no code with the
// optimized paths beyond raw_distance and the centroid update rule.

namespace accd::data {

/// Nearest centroid per point, ties to the lower centroid index.
std::vector<std::uint32_t> nearest_assign(MatrixView points, MatrixView centroids,
                                          const MetricSpec& metric);

/// Arithmetic mean of each cluster's members, accumulated in ascending point order.
/// Empty clusters keep their previous position.
std::vector<double> mean_centroids(MatrixView points, std::span<const std::uint32_t> assignment,
                                   MatrixView previous);

struct LloydTrace {
  std::vector<std::vector<std::uint32_t>> assignments;  // one entry per iteration
  std::vector<double> centroids;                        // final positions, k x d
  bool converged = false;
};

/// Plain Lloyd iteration. Iteration i assigns against the centroids produced by
/// iteration i-1; stops when an iteration changes no assignment or after max_iter.
LloydTrace naive_lloyd(MatrixView points, MatrixView initial_centroids, const MetricSpec& metric,
                       std::size_t max_iter);

/// Full-sort top-k per source point against every target point.
TopKResult brute_knn(const Dataset& src, const Dataset& trg, const MetricSpec& metric,
                     std::size_t k, Scope scope);

/// For each point, the IDs (ascending) of every other point within radius r (d <= r).
std::vector<std::vector<std::size_t>> brute_radius(const Dataset& points, const MetricSpec& metric,
                                                   double r);

}  // namespace accd::data
