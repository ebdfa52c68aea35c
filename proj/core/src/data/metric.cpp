#include "accd/data/metric.hpp"

#include <cmath>

#include "accd/error.hpp"

namespace accd::data {

std::optional<MetricSpec> MetricSpec::from_string(std::string_view text) {
  if (text == "Unweighted L1") return MetricSpec{MetricKind::L1, false, {}};
  if (text == "Unweighted L2") return MetricSpec{MetricKind::L2, false, {}};
  if (text == "Weighted L1") return MetricSpec{MetricKind::L1, true, {}};
  if (text == "Weighted L2") return MetricSpec{MetricKind::L2, true, {}};
  return std::nullopt;
}

std::string MetricSpec::name() const {
  std::string out = weighted ? "Weighted " : "Unweighted ";
  out += kind == MetricKind::L1 ? "L1" : "L2";
  return out;
}

void MetricSpec::check(std::size_t d) const {
  if (!weighted) {
    if (!weights.empty()) throw RangeError("unweighted metric must not carry weights");
    return;
  }
  if (weights.size() != d) {
    throw DimensionMismatch("metric weights have length " + std::to_string(weights.size()) +
                            ", data has " + std::to_string(d) + " dimensions");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw RangeError("metric weights must be finite and >= 0");
  }
}

DistanceCounter& global_distance_counter() {
  static DistanceCounter counter;
  return counter;
}

namespace detail {

double raw_distance(std::span<const double> p, std::span<const double> q,
                    const MetricSpec& metric) noexcept {
  const std::size_t d = p.size();
  double acc = 0.0;
  if (metric.kind == MetricKind::L1) {
    if (metric.weighted) {
      for (std::size_t i = 0; i < d; ++i) acc += metric.weights[i] * std::abs(p[i] - q[i]);
    } else {
      for (std::size_t i = 0; i < d; ++i) acc += std::abs(p[i] - q[i]);
    }
    return acc;
  }
  if (metric.weighted) {
    for (std::size_t i = 0; i < d; ++i) {
      const double t = p[i] - q[i];
      acc += metric.weights[i] * (t * t);
    }
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      const double t = p[i] - q[i];
      acc += t * t;
    }
  }
  return std::sqrt(acc);
}

}  // namespace detail

double distance(std::span<const double> p, std::span<const double> q, const MetricSpec& metric) {
  if (p.size() != q.size()) {
    throw DimensionMismatch("distance: points have " + std::to_string(p.size()) + " and " +
                            std::to_string(q.size()) + " dimensions");
  }
  if (metric.weighted && metric.weights.size() != p.size()) {
    throw DimensionMismatch("distance: weight vector length does not match dimensionality");
  }
  global_distance_counter().add(1);
  return detail::raw_distance(p, q, metric);
}

}  // namespace accd::data
