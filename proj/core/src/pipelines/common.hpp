#pragma once

#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "accd/error.hpp"
#include "accd/gti/filter.hpp"
#include "accd/gti/groups.hpp"
#include "accd/layout/layout.hpp"
#include "accd/pipelines/pipelines.hpp"

namespace accd::pipelines::detail {

/// A point set in the order the kernel reads it.
struct Packed {
  data::Dataset data;
  std::vector<std::vector<std::size_t>> members;  // per group, rows of `data`
  std::vector<std::size_t> orig;                  // row of `data` -> original row
  std::optional<layout::LayoutPlan> plan;
};

inline Packed pack(const data::Dataset& ds, const gti::GroupModel& gm, const RunConfig& cfg) {
  Packed p;
  if (!cfg.layout_enabled) {
    p.data = ds;
    p.members = gm.members;
    p.orig.resize(ds.size());
    std::iota(p.orig.begin(), p.orig.end(), std::size_t{0});
    return p;
  }
  p.plan = layout::pack_intra_group(ds, gm, cfg.n_banks);
  p.data = layout::apply_layout(ds, *p.plan);
  p.members.resize(gm.size());
  for (std::size_t g = 0; g < gm.size(); ++g) {
    p.members[g].resize(gm.members[g].size());
    std::iota(p.members[g].begin(), p.members[g].end(), p.plan->group_begin[g]);
  }
  p.orig = p.plan->point_perm;
  return p;
}

/// Kernel batches: runs of source groups with identical candidate lists when the layout
/// optimizer is on, one group per batch otherwise.
inline std::vector<std::vector<std::size_t>> make_runs(const gti::CandidateMatrix& cm, bool layout) {
  if (layout) return layout::candidate_runs(cm, layout::reorder_inter_group(cm));
  std::vector<std::vector<std::size_t>> runs;
  for (std::size_t a = 0; a < cm.source_groups(); ++a) {
    if (!cm.targets[a].empty()) runs.push_back({a});
  }
  return runs;
}

inline std::size_t default_groups(std::size_t n, double scale, std::size_t cap) {
  const auto z = static_cast<std::size_t>(std::llround(scale));
  return std::clamp<std::size_t>(z, 1, std::min(n, cap));
}

inline void finish_stats(IterationStats& s) {
  s.measured_saving = s.total_pairs == 0
                          ? 0.0
                          : 1.0 - static_cast<double>(s.point_distances) / static_cast<double>(s.total_pairs);
  if (s.point_distances + s.pruned_group_pairs + s.pruned_point_pairs + s.all_inside_pairs != s.total_pairs) {
    throw StateError("pair accounting does not add up to the brute-force pair count");
  }
}

inline void finish_result(RunResult& r) {
  std::vector<gti::PairTally> tallies;
  for (const auto& s : r.per_iteration) {
    r.point_distances += s.point_distances;
    r.bound_computations += s.bound_computations;
    r.pruned_pairs += s.pruned_pairs();
    r.exact_rechecks += s.exact_rechecks;
    tallies.push_back({s.point_distances, s.total_pairs});
  }
  r.iterations = r.per_iteration.size();
  if (!tallies.empty() && tallies.front().total > 0) r.measured_saving = gti::measured_saving(tallies);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline bool same_distance(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

}  // namespace accd::pipelines::detail
