#pragma once

#include <algorithm>

namespace accd::gti {

struct Bounds {
  double lb = 0.0;
  double ub = 0.0;
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Two landmarks: points A and B bounded through d(A_ref, B_ref) and their offsets
/// d(A, A_ref), d(B, B_ref). The lower bound is floored at zero.
constexpr Bounds two_landmark_bounds(double d_ref, double d_a, double d_b) noexcept {
  return {std::max(0.0, d_ref - d_a - d_b), d_ref + d_a + d_b};
}

/// Group level: same algebra with the group radii in place of point offsets. Valid for
/// every member pair of the two groups.
constexpr Bounds group_bounds(double d_ref, double radius_a, double radius_b) noexcept {
  return two_landmark_bounds(d_ref, radius_a, radius_b);
}

struct TraceBounds {
  double lb_group = 0.0;  // lower bound from point c to any target in the moved group
  double ub_point = 0.0;  // upper bound from c to its previous nearest target, moved
  friend bool operator==(const TraceBounds&, const TraceBounds&) = default;
};

/// Previous-iteration positions as landmarks: lb(c, G') = d(c, G) - d_max(G, G') and
/// ub(c, d') = d(c, d) + d(d, d'). If lb_group > ub_point no member of G' can be c's
/// nearest target.
constexpr TraceBounds trace_bounds(double prev_lb, double group_drift, double prev_best,
                                   double point_drift) noexcept {
  return {std::max(0.0, prev_lb - group_drift), prev_best + point_drift};
}

/// Tolerance added to the pruning side of every comparison so that floating-point
/// rounding in composed bounds can only cost a prune, never a result.
inline constexpr double kBoundSlackRelative = 1e-9;

constexpr double with_slack(double value) noexcept {
  return value + kBoundSlackRelative * std::max(1.0, value < 0 ? -value : value);
}

}  // namespace accd::gti
