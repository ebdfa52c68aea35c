#include "accd/data/brute.hpp"

#include "accd/error.hpp"

namespace accd::data {

DistanceMatrix DistanceMatrix::transposed() const {
  DistanceMatrix t;
  t.rows = cols;
  t.cols = rows;
  t.row_ids = col_ids;
  t.col_ids = row_ids;
  t.values.resize(values.size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t.values[j * rows + i] = values[i * cols + j];
  }
  return t;
}

DistanceMatrix pairwise_brute(const Dataset& src, const Dataset& trg, const MetricSpec& metric) {
  if (src.dim() != trg.dim()) {
    throw DimensionMismatch("pairwise_brute: source has d=" + std::to_string(src.dim()) +
                            ", target has d=" + std::to_string(trg.dim()));
  }
  metric.check(src.dim());
  DistanceMatrix out;
  out.rows = src.size();
  out.cols = trg.size();
  out.row_ids = src.ids();
  out.col_ids = trg.ids();
  out.values.resize(out.rows * out.cols);
  for (std::size_t i = 0; i < out.rows; ++i) {
    for (std::size_t j = 0; j < out.cols; ++j) {
      out.values[i * out.cols + j] = detail::raw_distance(src.row(i), trg.row(j), metric);
    }
  }
  global_distance_counter().add(static_cast<std::uint64_t>(out.rows) * out.cols);
  return out;
}

std::vector<double> brute_row(std::span<const double> p, MatrixView trg, const MetricSpec& metric) {
  if (p.size() != trg.cols()) throw DimensionMismatch("brute_row: dimensionality differs");
  std::vector<double> out(trg.rows());
  for (std::size_t j = 0; j < trg.rows(); ++j) out[j] = detail::raw_distance(p, trg.row(j), metric);
  global_distance_counter().add(trg.rows());
  return out;
}

}  // namespace accd::data
