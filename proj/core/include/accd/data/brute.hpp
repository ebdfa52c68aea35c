#pragma once

#include <cstddef>
#include <vector>

#include "accd/data/dataset.hpp"
#include "accd/data/metric.hpp"
#include "accd/data/topk.hpp"

namespace accd::data {

/// Dense n1 x n2 distance matrix.
struct DistanceMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::size_t> row_ids;
  std::vector<std::size_t> col_ids;

  double at(std::size_t i, std::size_t j) const noexcept { return values[i * cols + j]; }
  DistanceMatrix transposed() const;
};

/// Naive double loop; the reference every optimized path is checked against.
/// Adds n1*n2 to global_distance_counter().
DistanceMatrix pairwise_brute(const Dataset& src, const Dataset& trg, const MetricSpec& metric);

/// One row of the brute-force matrix without materializing the rest.
std::vector<double> brute_row(std::span<const double> p, MatrixView trg, const MetricSpec& metric);

}  // namespace accd::data
