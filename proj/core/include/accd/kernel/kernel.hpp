#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "accd/data/brute.hpp"
#include "accd/data/dataset.hpp"
#include "accd/data/metric.hpp"

namespace accd::kernel {

/// Accelerator block parameters. `frequency` only feeds the cost model.
struct KernelConfig {
  std::size_t blk = 64;     // tile edge, in points
  std::size_t simd = 4;     // lanes per tile (rows are dealt round-robin to lanes)
  std::size_t unroll = 4;   // inner-dimension unroll factor (cost model only)
  double frequency = 200e6; // Hz

  void check() const;
  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

struct KernelCounters {
  std::uint64_t mac_ops = 0;
  std::uint64_t point_distances = 0;
  std::uint64_t bytes_streamed = 0;  // modeled: every tile loads its row and column points once
  std::uint64_t tiles_executed = 0;
  double modeled_cycles = 0.0;

  KernelCounters& operator+=(const KernelCounters& o) {
    mac_ops += o.mac_ops;
    point_distances += o.point_distances;
    bytes_streamed += o.bytes_streamed;
    tiles_executed += o.tiles_executed;
    modeled_cycles += o.modeled_cycles;
    return *this;
  }
  friend bool operator==(const KernelCounters&, const KernelCounters&) = default;
};

/// Row-wise square sums, sum_j w_j * mat[i][j]^2 (w = 1 when unweighted).
std::vector<double> rss(data::MatrixView mat, const data::MetricSpec& metric = {});

/// Cycles for one tile: rows * cols * d / (unroll * simd).
double modeled_tile_cost(const KernelConfig& cfg, std::size_t rows, std::size_t cols, std::size_t d);

/// Blocked distance engine bound to a source and a target matrix.
///
/// L2 distances use the decomposition |a-b|^2 = rss(a) - 2 a.b + rss(b) with the dot
/// products accumulated in ascending dimension order, clamped at zero before the square
/// root. L1 falls back to a blocked elementwise loop. Results do not depend on blk, simd
/// or unroll; those only change the counters.
class DistanceKernel {
 public:
  DistanceKernel(data::MatrixView a, data::MatrixView b, data::MetricSpec metric, KernelConfig cfg);

  /// Fills out[r * cols.size() + c] = dist(a[rows[r]], b[cols[c]]).
  void compute(std::span<const std::size_t> rows, std::span<const std::size_t> cols,
               std::span<double> out, KernelCounters& counters) const;

  /// Bound on |computed - direct formula| for one pair. Zero for L1, whose loop is the
  /// direct formula; for L2 it covers rounding in the square sums and the dot product.
  double error_bound(std::size_t row, std::size_t col, double computed) const noexcept;

  const KernelConfig& config() const noexcept { return cfg_; }
  std::size_t dim() const noexcept { return a_.cols(); }

 private:
  void run_tile(std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                std::size_t out_stride, double* out) const;

  data::MatrixView a_;
  data::MatrixView b_;
  data::MetricSpec metric_;
  KernelConfig cfg_;
  std::vector<double> rss_a_;
  std::vector<double> rss_b_;
};

/// A rectangular block of work: every row index against every column index.
struct IndexBlock {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

/// Full (or masked) distance matrix through the blocked kernel. When `blocks` is given
/// only those pairs are computed; every other entry is NaN.
data::DistanceMatrix distances_blocked(const data::Dataset& a, const data::Dataset& b,
                                       const data::MetricSpec& metric, const KernelConfig& cfg,
                                       KernelCounters& counters,
                                       std::optional<std::span<const IndexBlock>> blocks = std::nullopt);

}  // namespace accd::kernel
