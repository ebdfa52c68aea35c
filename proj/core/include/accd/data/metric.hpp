#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace accd::data {

enum class MetricKind { L1, L2 };

/// Distance metric of a compute-distance construct: (Weighted|Unweighted) L1/L2.
struct MetricSpec {
  MetricKind kind = MetricKind::L2;
  bool weighted = false;
  std::vector<double> weights;  // present iff weighted

  static MetricSpec unweighted(MetricKind kind) { return {kind, false, {}}; }
  static MetricSpec with_weights(MetricKind kind, std::vector<double> w) {
    return {kind, true, std::move(w)};
  }

  /// Maps the DDSL metric string ("Unweighted L1", "Weighted L2", ...). Case-sensitive.
  static std::optional<MetricSpec> from_string(std::string_view text);
  /// "Unweighted L2" etc.
  std::string name() const;

  /// Throws DimensionMismatch / RangeError if weights don't fit a d-dimensional space.
  void check(std::size_t d) const;

  double weight(std::size_t i) const noexcept { return weighted ? weights[i] : 1.0; }

  friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

/// Process-wide tally of true point-point distance evaluations.
class DistanceCounter {
 public:
  void add(std::uint64_t n) noexcept { count_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t value() const noexcept { return count_.load(std::memory_order_relaxed); }
  void reset() noexcept { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

DistanceCounter& global_distance_counter();

namespace detail {
/// Uncounted evaluation. Summation runs in ascending dimension order.
double raw_distance(std::span<const double> p, std::span<const double> q,
                    const MetricSpec& metric) noexcept;
}  // namespace detail

/// L1 = sum w_i |p_i - q_i|; L2 = sqrt(sum w_i (p_i - q_i)^2). Counts one evaluation.
double distance(std::span<const double> p, std::span<const double> q, const MetricSpec& metric);

}  // namespace accd::data
