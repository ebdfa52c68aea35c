#include <algorithm>
#include <limits>
#include <string>

#include "accd/data/oracle.hpp"
#include "accd/gti/bounds.hpp"
#include "accd/util/parallel.hpp"
#include "common.hpp"

namespace accd::pipelines {

namespace {

struct RunTally {
  std::uint64_t pruned_point = 0;
  std::uint64_t rechecks = 0;
  kernel::KernelCounters kernel;
};

void check_against_brute(const data::TopKResult& got, const data::Dataset& src,
                         const data::Dataset& trg, const data::MetricSpec& metric) {
  const auto want = data::brute_knn(src, trg, metric, got.k, got.scope);
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t r = 0; r < got.k; ++r) {
      const auto& g = got.rows[i][r];
      const auto& w = want.rows[i][r];
      if (g.id != w.id || !detail::same_distance(g.distance, w.distance)) {
        throw OracleMismatch("knn point " + std::to_string(src.id(i)) + ", rank " + std::to_string(r + 1) +
                             ": pipeline (" + std::to_string(g.id) + ", " + std::to_string(g.distance) +
                             "), oracle (" + std::to_string(w.id) + ", " + std::to_string(w.distance) + ")");
      }
    }
  }
}

}  // namespace

RunResult run_knn_join(const ddsl::ExecutionPlan& plan, const data::Dataset& src,
                       const data::Dataset& trg, const RunConfig& config) {
  if (plan.pipeline_kind != ddsl::PipelineKind::OneshotTwoSet) {
    throw InvalidQuery("run_knn_join: plan is " + std::string(ddsl::pipeline_kind_name(plan.pipeline_kind)));
  }
  if (plan.select.kind != ddsl::Selection::Kind::Count) {
    throw InvalidQuery("run_knn_join: plan does not select a count");
  }
  config.check();
  detail::Stopwatch clock;
  if (src.dim() != trg.dim()) {
    throw DimensionMismatch("run_knn_join: source d=" + std::to_string(src.dim()) + ", target d=" +
                            std::to_string(trg.dim()));
  }
  const data::MetricSpec& metric = plan.metric;
  metric.check(src.dim());
  const std::size_t m = src.size();
  const std::size_t n = trg.size();
  const std::size_t k = plan.select.k;
  const data::Scope scope = plan.select.scope;
  if (k == 0 || k > n) {
    throw InvalidQuery("run_knn_join: K=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }

  const std::size_t z_src =
      config.n_src_grp.value_or(detail::default_groups(m, std::sqrt(static_cast<double>(m)), 256));
  const std::size_t z_trg =
      config.n_trg_grp.value_or(detail::default_groups(n, std::sqrt(static_cast<double>(n)), 256));
  const gti::GroupModel sg = gti::build_groups(src.view(), z_src, metric, config.seed);
  const gti::GroupModel tg = gti::build_groups(trg.view(), z_trg, metric, config.seed + 1);
  const gti::GroupPairBounds bounds = gti::compute_group_pair_bounds(sg, tg, metric);
  const gti::OneshotFilter filt = gti::filter_oneshot(sg, tg, bounds, gti::Query::top_k(k, scope));

  RunResult result;
  result.kind = plan.pipeline_kind;
  result.src_groups = z_src;
  result.trg_groups = z_trg;
  result.grouping_distances = sg.grouping_distances + tg.grouping_distances;

  IterationStats stats;
  stats.total_pairs = static_cast<std::uint64_t>(m) * n;
  stats.bound_computations = filt.bound_computations;
  const auto& cm = filt.candidates;
  for (std::size_t a = 0; a < z_src; ++a) {
    std::uint64_t kept = 0;
    for (std::size_t b : cm.targets[a]) kept += tg.members[b].size();
    stats.pruned_group_pairs += sg.members[a].size() * (n - kept);
    stats.source_groups_active += cm.targets[a].empty() ? 0 : 1;
  }

  const detail::Packed ps = detail::pack(src, sg, config);
  result.layout = ps.plan;
  const detail::Packed pt = detail::pack(trg, tg, config);
  const auto runs = detail::make_runs(cm, config.layout_enabled);
  stats.candidate_runs = runs.size();

  const kernel::DistanceKernel kern(ps.data.view(), pt.data.view(), metric, config.kernel);
  std::vector<data::TopKAccumulator> acc(m, data::TopKAccumulator(k, scope));
  std::vector<RunTally> tallies(runs.size());
  const bool smallest = scope == data::Scope::Smallest;

  util::parallel_for(runs.size(), config.thread_count, [&](std::size_t r) {
    const auto& run = runs[r];
    std::vector<std::size_t> order = cm.targets[run.front()];
    // Most promising target groups first, so the running k-th best tightens early.
    std::vector<double> key(tg.size(), 0.0);
    for (std::size_t b : order) {
      double v = smallest ? std::numeric_limits<double>::infinity() : 0.0;
      for (std::size_t a : run) {
        v = smallest ? std::min(v, bounds.lb[bounds.index(a, b)]) : std::max(v, bounds.ub[bounds.index(a, b)]);
      }
      key[b] = v;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return smallest ? key[x] < key[y] : key[x] > key[y];
    });

    std::vector<std::size_t> rows_all;
    for (std::size_t a : run) rows_all.insert(rows_all.end(), ps.members[a].begin(), ps.members[a].end());
    std::vector<std::size_t> rows;
    std::vector<double> buf;
    for (std::size_t b : order) {
      const auto& cols = pt.members[b];
      rows.clear();
      for (std::size_t row : rows_all) {
        auto& heap = acc[row];
        if (heap.full()) {
          const std::size_t p = ps.orig[row];
          const auto pb = gti::two_landmark_bounds(bounds.center_dist[bounds.index(sg.group_of[p], b)],
                                                   sg.point_to_landmark[p], tg.radius[b]);
          const bool skip = smallest ? pb.lb > gti::with_slack(heap.threshold())
                                     : gti::with_slack(pb.ub) < heap.threshold();
          if (skip) {
            tallies[r].pruned_point += cols.size();
            continue;
          }
        }
        rows.push_back(row);
      }
      if (rows.empty()) continue;
      buf.resize(rows.size() * cols.size());
      kern.compute(rows, cols, buf, tallies[r].kernel);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& heap = acc[rows[i]];
        for (std::size_t j = 0; j < cols.size(); ++j) {
          // The heap holds direct-formula distances; the kernel value only screens.
          const double dist = buf[i * cols.size() + j];
          if (heap.full()) {
            const double err = kern.error_bound(rows[i], cols[j], dist);
            if (smallest ? dist - err > heap.threshold() : dist + err < heap.threshold()) continue;
          }
          ++tallies[r].rechecks;
          heap.offer(pt.data.id(cols[j]),
                     data::detail::raw_distance(ps.data.row(rows[i]), pt.data.row(cols[j]), metric));
        }
      }
    }
  });

  for (const auto& t : tallies) {
    stats.pruned_point_pairs += t.pruned_point;
    stats.exact_rechecks += t.rechecks;
    result.kernel += t.kernel;
  }
  stats.point_distances = result.kernel.point_distances;
  stats.tiles = result.kernel.tiles_executed;
  stats.modeled_cycles = result.kernel.modeled_cycles;
  stats.status = false;
  detail::finish_stats(stats);
  result.per_iteration.push_back(stats);

  data::TopKResult topk;
  topk.k = k;
  topk.scope = scope;
  topk.rows.resize(m);
  for (std::size_t i = 0; i < m; ++i) topk.rows[i] = acc[i].take_sorted();
  if (ps.plan) topk = layout::restore_ids(std::move(topk), *ps.plan);
  result.topk = std::move(topk);
  detail::finish_result(result);
  result.wall_seconds = clock.seconds();

  if (config.oracle_mode == OracleMode::Shadow) {
    check_against_brute(*result.topk, src, trg, metric);
    result.oracle_checked = true;
  }
  return result;
}

}  // namespace accd::pipelines
