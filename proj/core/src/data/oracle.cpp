#include "accd/data/oracle.hpp"

#include <algorithm>
#include <limits>

#include "accd/data/brute.hpp"
#include "accd/error.hpp"

namespace accd::data {

std::vector<std::uint32_t> nearest_assign(MatrixView points, MatrixView centroids,
                                          const MetricSpec& metric) {
  if (points.cols() != centroids.cols()) throw DimensionMismatch("nearest_assign: dims differ");
  std::vector<std::uint32_t> out(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t arg = 0;
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      const double dist = detail::raw_distance(points.row(i), centroids.row(c), metric);
      if (dist < best) {
        best = dist;
        arg = static_cast<std::uint32_t>(c);
      }
    }
    out[i] = arg;
  }
  global_distance_counter().add(static_cast<std::uint64_t>(points.rows()) * centroids.rows());
  return out;
}

std::vector<double> mean_centroids(MatrixView points, std::span<const std::uint32_t> assignment,
                                   MatrixView previous) {
  const std::size_t k = previous.rows();
  const std::size_t d = previous.cols();
  std::vector<double> sums(k * d, 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const std::size_t c = assignment[i];
    const auto p = points.row(i);
    for (std::size_t j = 0; j < d; ++j) sums[c * d + j] += p[j];
    ++counts[c];
  }
  for (std::size_t c = 0; c < k; ++c) {
    const auto prev = previous.row(c);
    for (std::size_t j = 0; j < d; ++j) {
      sums[c * d + j] = counts[c] == 0 ? prev[j] : sums[c * d + j] / static_cast<double>(counts[c]);
    }
  }
  return sums;
}

LloydTrace naive_lloyd(MatrixView points, MatrixView initial_centroids, const MetricSpec& metric,
                       std::size_t max_iter) {
  LloydTrace trace;
  const std::size_t k = initial_centroids.rows();
  const std::size_t d = initial_centroids.cols();
  trace.centroids.assign(initial_centroids.values().begin(), initial_centroids.values().end());
  for (std::size_t it = 0; it < max_iter; ++it) {
    auto assign = nearest_assign(points, MatrixView(trace.centroids, k, d), metric);
    const bool changed = trace.assignments.empty() || assign != trace.assignments.back();
    trace.assignments.push_back(std::move(assign));
    if (!changed) {
      trace.converged = true;
      break;
    }
    trace.centroids =
        mean_centroids(points, trace.assignments.back(), MatrixView(trace.centroids, k, d));
  }
  return trace;
}

TopKResult brute_knn(const Dataset& src, const Dataset& trg, const MetricSpec& metric,
                     std::size_t k, Scope scope) {
  if (k == 0 || k > trg.size()) throw InvalidQuery("brute_knn: k outside [1, target size]");
  TopKResult out;
  out.k = k;
  out.scope = scope;
  out.rows.resize(src.size());
  std::vector<Neighbor> row(trg.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto dist = brute_row(src.row(i), trg.view(), metric);
    for (std::size_t j = 0; j < trg.size(); ++j) row[j] = {trg.id(j), dist[j]};
    std::sort(row.begin(), row.end(),
              [scope](const Neighbor& a, const Neighbor& b) { return ranks_before(a, b, scope); });
    out.rows[i].assign(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return out;
}

std::vector<std::vector<std::size_t>> brute_radius(const Dataset& points, const MetricSpec& metric,
                                                   double r) {
  std::vector<std::vector<std::size_t>> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto dist = brute_row(points.row(i), points.view(), metric);
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i && dist[j] <= r) out[i].push_back(points.id(j));
    }
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

}  // namespace accd::data
