#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "accd/data/metric.hpp"
#include "accd/data/topk.hpp"
#include "accd/gti/bounds.hpp"
#include "accd/gti/groups.hpp"

namespace accd::gti {

/// What the downstream selection needs: the k best targets, or every target within r.
struct Query {
  enum class Kind { TopK, Radius };
  Kind kind = Kind::TopK;
  std::size_t k = 1;
  double radius = 0.0;
  data::Scope scope = data::Scope::Smallest;

  static Query top_k(std::size_t k, data::Scope scope = data::Scope::Smallest) {
    return {Kind::TopK, k, 0.0, scope};
  }
  static Query within(double r) { return {Kind::Radius, 0, r, data::Scope::Smallest}; }
};

/// Landmark-pair distances and the group bounds derived from them.
struct GroupPairBounds {
  std::size_t z_src = 0;
  std::size_t z_trg = 0;
  std::vector<double> center_dist;  // d(A_ref, B_ref)
  std::vector<double> lb;
  std::vector<double> ub;
  std::uint64_t landmark_pair_distances = 0;

  std::size_t index(std::size_t a, std::size_t b) const noexcept { return a * z_trg + b; }
  Bounds at(std::size_t a, std::size_t b) const noexcept {
    return {lb[index(a, b)], ub[index(a, b)]};
  }
};

/// z_src * z_trg landmark distances plus group bounds from the current radii.
GroupPairBounds compute_group_pair_bounds(const GroupModel& src, const GroupModel& trg,
                                          const data::MetricSpec& metric);

/// Re-derives lb/ub from cached landmark distances and new radii. No distances evaluated.
void refresh_group_pair_bounds(GroupPairBounds& bounds, std::span<const double> src_radius,
                               std::span<const double> trg_radius);

/// Per source group, the surviving target groups (ascending IDs). `all_inside` is the
/// subset whose every member pair is already known to satisfy a radius query.
struct CandidateMatrix {
  std::vector<std::vector<std::size_t>> targets;
  std::vector<std::vector<std::size_t>> all_inside;

  std::size_t source_groups() const noexcept { return targets.size(); }
  bool is_all_inside(std::size_t src_group, std::size_t trg_group) const;
  friend bool operator==(const CandidateMatrix&, const CandidateMatrix&) = default;
};

struct OneshotFilter {
  CandidateMatrix candidates;
  std::vector<double> thresholds;     // per source group: R, or the top-k cover threshold
  std::uint64_t bound_computations = 0;  // m + n + z_src * z_trg
};

/// Two-landmark + group-level filtering for non-iterative queries.
///
/// Radius r: B survives for A iff lb(A,B) <= r, and is all-inside iff ub(A,B) <= r.
/// Top-k (smallest): target groups are walked in ascending ub order accumulating their
/// sizes until k points are covered; that ub is tau_A, and B survives iff lb(A,B) <= tau_A.
/// Largest mirrors this with descending lb and ub >= tau_A.
/// Pass the same GroupModel twice for a self join; its point offsets are counted once.
OneshotFilter filter_oneshot(const GroupModel& src, const GroupModel& trg,
                             const GroupPairBounds& bounds, const Query& query);

/// Trace state carried between iterations of a nearest-target (k = 1) search whose
/// targets move, such as K-means centroids.
struct BoundState {
  std::size_t z_src = 0;
  std::size_t z_trg = 0;
  std::size_t iterations_completed = 0;
  std::vector<double> group_lb;          // z_src x z_trg: min over members of point_lb
  std::vector<double> point_lb;          // n_src x z_trg: lower bound to every target of G
  std::vector<double> prev_best;         // n_src: d(c, d) for the nearest target d
  std::vector<std::size_t> prev_owner;   // n_src: index of that target

  /// Sizes every array for n_src points; nothing is valid until the first full pass.
  static BoundState sized(std::size_t n_src, std::size_t z_src, std::size_t z_trg);
  /// Recomputes group_lb from point_lb for the given source grouping.
  void refresh_group_lb(const GroupModel& src_groups);
};

/// How far the targets moved since the last iteration.
struct Drifts {
  std::vector<double> group;  // per target group: max member drift, d_max(G, G')
  std::vector<double> point;  // per target: d(d, d')
};

/// One distance per target between its old and new position. Adds them to `evaluated`.
Drifts measure_drifts(data::MatrixView old_targets, data::MatrixView new_targets,
                      std::span<const std::size_t> target_group_of, std::size_t z_trg,
                      const data::MetricSpec& metric, std::uint64_t& evaluated);

/// Group-level trace filtering. G is dropped for every member of source group A iff
/// max(0, group_lb(A,G) - drift(G)) > max over a in A of prev_best(a) + drift(owner(a)).
/// Only the k = 1 smallest query is supported (InvalidQuery otherwise); throws StateError
/// before the first full iteration has seeded the state.
CandidateMatrix filter_iterative(const BoundState& state, const GroupModel& src_groups,
                                 const Drifts& drifts, const Query& query);

/// Per-iteration (computed, total) point-pair counts.
struct PairTally {
  std::uint64_t computed = 0;
  std::uint64_t total = 0;
};

/// Mean over iterations of 1 - computed / total. Throws RangeError on a zero total.
double measured_saving(std::span<const PairTally> iterations);

}  // namespace accd::gti
