#include "accd/kernel/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "accd/error.hpp"

namespace accd::kernel {

void KernelConfig::check() const {
  if (blk == 0 || simd == 0 || unroll == 0) throw RangeError("kernel config: blk, simd, unroll must be >= 1");
  if (!(frequency > 0.0)) throw RangeError("kernel config: frequency must be > 0");
}

std::vector<double> rss(data::MatrixView mat, const data::MetricSpec& metric) {
  std::vector<double> out(mat.rows(), 0.0);
  for (std::size_t i = 0; i < mat.rows(); ++i) {
    const auto r = mat.row(i);
    double acc = 0.0;
    if (metric.weighted) {
      for (std::size_t j = 0; j < r.size(); ++j) acc += metric.weights[j] * (r[j] * r[j]);
    } else {
      for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * r[j];
    }
    out[i] = acc;
  }
  return out;
}

double modeled_tile_cost(const KernelConfig& cfg, std::size_t rows, std::size_t cols, std::size_t d) {
  return static_cast<double>(rows) * static_cast<double>(cols) * static_cast<double>(d) /
         (static_cast<double>(cfg.unroll) * static_cast<double>(cfg.simd));
}

DistanceKernel::DistanceKernel(data::MatrixView a, data::MatrixView b, data::MetricSpec metric,
                               KernelConfig cfg)
    : a_(a), b_(b), metric_(std::move(metric)), cfg_(cfg) {
  cfg_.check();
  if (a_.cols() != b_.cols()) {
    throw DimensionMismatch("kernel: source has d=" + std::to_string(a_.cols()) +
                            ", target has d=" + std::to_string(b_.cols()));
  }
  metric_.check(a_.cols());
  if (metric_.kind == data::MetricKind::L2) {
    rss_a_ = rss(a_, metric_);
    rss_b_ = rss(b_, metric_);
  }
}

double DistanceKernel::error_bound(std::size_t row, std::size_t col, double computed) const noexcept {
  if (metric_.kind != data::MetricKind::L2) return 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double d = static_cast<double>(a_.cols());
  return std::sqrt((2.0 * d + 4.0) * eps * (rss_a_[row] + rss_b_[col])) + (d + 2.0) * eps * computed;
}

void DistanceKernel::run_tile(std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                              std::size_t out_stride, double* out) const {
  const std::size_t d = a_.cols();
  const bool l2 = metric_.kind == data::MetricKind::L2;
  const bool weighted = metric_.weighted;
  const double* w = weighted ? metric_.weights.data() : nullptr;
  // Lane l owns tile rows l, l+simd, l+2*simd, ...
  for (std::size_t lane = 0; lane < cfg_.simd && lane < rows.size(); ++lane) {
    for (std::size_t r = lane; r < rows.size(); r += cfg_.simd) {
      const double* pa = a_.row(rows[r]).data();
      double* orow = out + r * out_stride;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const double* pb = b_.row(cols[c]).data();
        double acc = 0.0;
        if (l2) {
          if (weighted) {
            for (std::size_t j = 0; j < d; ++j) acc += w[j] * (pa[j] * pb[j]);
          } else {
            for (std::size_t j = 0; j < d; ++j) acc += pa[j] * pb[j];
          }
          const double sq = (rss_a_[rows[r]] - 2.0 * acc) + rss_b_[cols[c]];
          orow[c] = std::sqrt(std::max(0.0, sq));
        } else {
          if (weighted) {
            for (std::size_t j = 0; j < d; ++j) acc += w[j] * std::abs(pa[j] - pb[j]);
          } else {
            for (std::size_t j = 0; j < d; ++j) acc += std::abs(pa[j] - pb[j]);
          }
          orow[c] = acc;
        }
      }
    }
  }
}

void DistanceKernel::compute(std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                             std::span<double> out, KernelCounters& counters) const {
  if (out.size() != rows.size() * cols.size()) throw SizeMismatch("kernel: output buffer size");
  const std::size_t blk = cfg_.blk;
  const std::size_t d = a_.cols();
  for (std::size_t r0 = 0; r0 < rows.size(); r0 += blk) {
    const std::size_t nr = std::min(blk, rows.size() - r0);
    for (std::size_t c0 = 0; c0 < cols.size(); c0 += blk) {
      const std::size_t nc = std::min(blk, cols.size() - c0);
      run_tile(rows.subspan(r0, nr), cols.subspan(c0, nc), cols.size(),
               out.data() + r0 * cols.size() + c0);
      counters.tiles_executed += 1;
      counters.point_distances += nr * nc;
      counters.mac_ops += static_cast<std::uint64_t>(nr) * nc * d;
      counters.bytes_streamed += static_cast<std::uint64_t>(nr + nc) * d * sizeof(double);
      counters.modeled_cycles += modeled_tile_cost(cfg_, nr, nc, d);
    }
  }
  data::global_distance_counter().add(static_cast<std::uint64_t>(rows.size()) * cols.size());
}

data::DistanceMatrix distances_blocked(const data::Dataset& a, const data::Dataset& b,
                                       const data::MetricSpec& metric, const KernelConfig& cfg,
                                       KernelCounters& counters,
                                       std::optional<std::span<const IndexBlock>> blocks) {
  DistanceKernel kernel(a.view(), b.view(), metric, cfg);
  data::DistanceMatrix out;
  out.rows = a.size();
  out.cols = b.size();
  out.row_ids = a.ids();
  out.col_ids = b.ids();
  if (!blocks) {
    out.values.resize(out.rows * out.cols);
    std::vector<std::size_t> rows(a.size());
    std::vector<std::size_t> cols(b.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    kernel.compute(rows, cols, out.values, counters);
    return out;
  }
  out.values.assign(out.rows * out.cols, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> buf;
  for (const auto& block : *blocks) {
    for (auto r : block.rows) {
      if (r >= a.size()) throw RangeError("distances_blocked: row index out of range");
    }
    for (auto c : block.cols) {
      if (c >= b.size()) throw RangeError("distances_blocked: column index out of range");
    }
    buf.resize(block.rows.size() * block.cols.size());
    kernel.compute(block.rows, block.cols, buf, counters);
    for (std::size_t r = 0; r < block.rows.size(); ++r) {
      for (std::size_t c = 0; c < block.cols.size(); ++c) {
        out.values[block.rows[r] * out.cols + block.cols[c]] = buf[r * block.cols.size() + c];
      }
    }
  }
  return out;
}

}  // namespace accd::kernel
