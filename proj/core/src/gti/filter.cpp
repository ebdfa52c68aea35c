#include "accd/gti/filter.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "accd/error.hpp"

namespace accd::gti {

GroupPairBounds compute_group_pair_bounds(const GroupModel& src, const GroupModel& trg,
                                          const data::MetricSpec& metric) {
  if (src.dim != trg.dim) throw DimensionMismatch("group bounds: landmark dimensionality differs");
  GroupPairBounds b;
  b.z_src = src.size();
  b.z_trg = trg.size();
  b.center_dist.resize(b.z_src * b.z_trg);
  for (std::size_t a = 0; a < b.z_src; ++a) {
    for (std::size_t t = 0; t < b.z_trg; ++t) {
      b.center_dist[b.index(a, t)] =
          data::detail::raw_distance(src.landmark(a), trg.landmark(t), metric);
    }
  }
  b.landmark_pair_distances = static_cast<std::uint64_t>(b.z_src) * b.z_trg;
  data::global_distance_counter().add(b.landmark_pair_distances);
  refresh_group_pair_bounds(b, src.radius, trg.radius);
  return b;
}

void refresh_group_pair_bounds(GroupPairBounds& b, std::span<const double> src_radius,
                               std::span<const double> trg_radius) {
  if (src_radius.size() != b.z_src || trg_radius.size() != b.z_trg) {
    throw SizeMismatch("group bounds: radius vector length");
  }
  b.lb.resize(b.center_dist.size());
  b.ub.resize(b.center_dist.size());
  for (std::size_t a = 0; a < b.z_src; ++a) {
    for (std::size_t t = 0; t < b.z_trg; ++t) {
      const auto gb = group_bounds(b.center_dist[b.index(a, t)], src_radius[a], trg_radius[t]);
      b.lb[b.index(a, t)] = gb.lb;
      b.ub[b.index(a, t)] = gb.ub;
    }
  }
}

bool CandidateMatrix::is_all_inside(std::size_t src_group, std::size_t trg_group) const {
  if (src_group >= all_inside.size()) return false;
  const auto& v = all_inside[src_group];
  return std::binary_search(v.begin(), v.end(), trg_group);
}

OneshotFilter filter_oneshot(const GroupModel& src, const GroupModel& trg,
                             const GroupPairBounds& bounds, const Query& query) {
  if (bounds.z_src != src.size() || bounds.z_trg != trg.size()) {
    throw SizeMismatch("filter_oneshot: bounds do not match the group models");
  }
  OneshotFilter out;
  out.candidates.targets.assign(src.size(), {});
  out.candidates.all_inside.assign(src.size(), {});
  out.thresholds.assign(src.size(), 0.0);
  out.bound_computations = src.landmark_distances + bounds.landmark_pair_distances;
  if (&src != &trg) out.bound_computations += trg.landmark_distances;

  if (query.kind == Query::Kind::Radius) {
    if (!(query.radius > 0.0)) throw InvalidQuery("filter_oneshot: radius must be > 0");
    for (std::size_t a = 0; a < src.size(); ++a) {
      out.thresholds[a] = query.radius;
      if (src.members[a].empty()) continue;
      for (std::size_t t = 0; t < trg.size(); ++t) {
        if (trg.members[t].empty()) continue;
        const auto gb = bounds.at(a, t);
        if (gb.lb > with_slack(query.radius)) continue;
        out.candidates.targets[a].push_back(t);
        if (with_slack(gb.ub) <= query.radius) out.candidates.all_inside[a].push_back(t);
      }
    }
    return out;
  }

  if (query.k == 0 || query.k > trg.points()) {
    throw InvalidQuery("filter_oneshot: k=" + std::to_string(query.k) + " outside [1, " +
                       std::to_string(trg.points()) + "]");
  }
  const bool smallest = query.scope == data::Scope::Smallest;
  std::vector<std::size_t> order(trg.size());
  for (std::size_t a = 0; a < src.size(); ++a) {
    if (src.members[a].empty()) continue;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      const double vx = smallest ? bounds.ub[bounds.index(a, x)] : bounds.lb[bounds.index(a, x)];
      const double vy = smallest ? bounds.ub[bounds.index(a, y)] : bounds.lb[bounds.index(a, y)];
      if (vx != vy) return smallest ? vx < vy : vx > vy;
      return x < y;
    });
    std::size_t covered = 0;
    double tau = 0.0;
    for (std::size_t t : order) {
      if (trg.members[t].empty()) continue;
      covered += trg.members[t].size();
      tau = smallest ? bounds.ub[bounds.index(a, t)] : bounds.lb[bounds.index(a, t)];
      if (covered >= query.k) break;
    }
    out.thresholds[a] = tau;
    for (std::size_t t = 0; t < trg.size(); ++t) {
      if (trg.members[t].empty()) continue;
      const auto gb = bounds.at(a, t);
      const bool keep = smallest ? gb.lb <= with_slack(tau) : with_slack(gb.ub) >= tau;
      if (keep) out.candidates.targets[a].push_back(t);
    }
  }
  return out;
}

BoundState BoundState::sized(std::size_t n_src, std::size_t z_src, std::size_t z_trg) {
  BoundState s;
  s.z_src = z_src;
  s.z_trg = z_trg;
  s.group_lb.assign(z_src * z_trg, 0.0);
  s.point_lb.assign(n_src * z_trg, 0.0);
  s.prev_best.assign(n_src, 0.0);
  s.prev_owner.assign(n_src, 0);
  return s;
}

void BoundState::refresh_group_lb(const GroupModel& src_groups) {
  for (std::size_t a = 0; a < z_src; ++a) {
    for (std::size_t g = 0; g < z_trg; ++g) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t p : src_groups.members[a]) m = std::min(m, point_lb[p * z_trg + g]);
      group_lb[a * z_trg + g] = src_groups.members[a].empty() ? 0.0 : m;
    }
  }
}

Drifts measure_drifts(data::MatrixView old_targets, data::MatrixView new_targets,
                      std::span<const std::size_t> target_group_of, std::size_t z_trg,
                      const data::MetricSpec& metric, std::uint64_t& evaluated) {
  if (old_targets.rows() != new_targets.rows() || old_targets.cols() != new_targets.cols() ||
      target_group_of.size() != old_targets.rows()) {
    throw SizeMismatch("measure_drifts: target matrices differ in shape");
  }
  Drifts dr;
  dr.group.assign(z_trg, 0.0);
  dr.point.resize(old_targets.rows());
  for (std::size_t j = 0; j < old_targets.rows(); ++j) {
    dr.point[j] = data::detail::raw_distance(old_targets.row(j), new_targets.row(j), metric);
    dr.group[target_group_of[j]] = std::max(dr.group[target_group_of[j]], dr.point[j]);
  }
  evaluated += old_targets.rows();
  data::global_distance_counter().add(old_targets.rows());
  return dr;
}

CandidateMatrix filter_iterative(const BoundState& state, const GroupModel& src_groups,
                                 const Drifts& drifts, const Query& query) {
  if (state.iterations_completed == 0) {
    throw StateError("filter_iterative: the first iteration must run unpruned to seed bounds");
  }
  if (query.kind != Query::Kind::TopK || query.k != 1 || query.scope != data::Scope::Smallest) {
    throw InvalidQuery("filter_iterative: only the nearest-target query is supported");
  }
  if (src_groups.size() != state.z_src || drifts.group.size() != state.z_trg) {
    throw SizeMismatch("filter_iterative: state does not match groups/drifts");
  }
  CandidateMatrix cm;
  cm.targets.assign(state.z_src, {});
  cm.all_inside.assign(state.z_src, {});
  for (std::size_t a = 0; a < state.z_src; ++a) {
    const auto& members = src_groups.members[a];
    if (members.empty()) continue;
    double weakest = 0.0;  // max ub over the group's points
    for (std::size_t p : members) {
      const auto tb = trace_bounds(0.0, 0.0, state.prev_best[p], drifts.point[state.prev_owner[p]]);
      weakest = std::max(weakest, tb.ub_point);
    }
    for (std::size_t g = 0; g < state.z_trg; ++g) {
      const auto tb = trace_bounds(state.group_lb[a * state.z_trg + g], drifts.group[g], 0.0, 0.0);
      if (tb.lb_group > with_slack(weakest)) continue;
      cm.targets[a].push_back(g);
    }
  }
  return cm;
}

double measured_saving(std::span<const PairTally> iterations) {
  if (iterations.empty()) throw RangeError("measured_saving: no iterations recorded");
  double acc = 0.0;
  for (const auto& it : iterations) {
    if (it.total == 0) throw RangeError("measured_saving: zero brute-force pair count");
    acc += 1.0 - static_cast<double>(it.computed) / static_cast<double>(it.total);
  }
  return acc / static_cast<double>(iterations.size());
}

}  // namespace accd::gti
