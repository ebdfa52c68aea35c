#include <algorithm>
#include <limits>
#include <string>

#include "accd/data/oracle.hpp"
#include "accd/gti/bounds.hpp"
#include "accd/util/parallel.hpp"
#include "accd/util/rng.hpp"
#include "common.hpp"

namespace accd::pipelines {

namespace {

struct RunTally {
  std::uint64_t pruned_point = 0;
  std::uint64_t rechecks = 0;
  kernel::KernelCounters kernel;
};

void check_against_lloyd(const RunResult& r, const data::Dataset& points, const data::Dataset& init,
                         const data::MetricSpec& metric, std::size_t max_iter) {
  const auto trace = data::naive_lloyd(points.view(), init.view(), metric, max_iter);
  const std::size_t common = std::min(trace.assignments.size(), r.assignments.size());
  for (std::size_t it = 0; it < common; ++it) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (trace.assignments[it][p] != r.assignments[it][p]) {
        throw OracleMismatch("k-means iteration " + std::to_string(it + 1) + ", point " +
                             std::to_string(points.id(p)) + ": pipeline cluster " +
                             std::to_string(r.assignments[it][p]) + ", oracle cluster " +
                             std::to_string(trace.assignments[it][p]));
      }
    }
  }
  if (trace.assignments.size() != r.assignments.size()) {
    throw OracleMismatch("k-means ran " + std::to_string(r.assignments.size()) +
                         " iterations, oracle ran " + std::to_string(trace.assignments.size()));
  }
}

}  // namespace

RunResult run_kmeans(const ddsl::ExecutionPlan& plan, const data::Dataset& points,
                     const RunConfig& config, std::optional<data::Dataset> initial_centroids) {
  if (plan.pipeline_kind != ddsl::PipelineKind::IterativeTwoSet) {
    throw InvalidQuery("run_kmeans: plan is " + std::string(ddsl::pipeline_kind_name(plan.pipeline_kind)));
  }
  config.check();
  detail::Stopwatch clock;
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  const data::MetricSpec& metric = plan.metric;
  metric.check(d);

  data::Dataset init;
  if (initial_centroids) {
    if (initial_centroids->dim() != d) {
      throw DimensionMismatch("run_kmeans: centroids have d=" + std::to_string(initial_centroids->dim()) +
                              ", points have d=" + std::to_string(d));
    }
    init = std::move(*initial_centroids);
  } else {
    const std::size_t k = plan.target_set.size;
    if (k == 0 || k > n) {
      throw InvalidQuery("run_kmeans: " + std::to_string(k) + " clusters for " + std::to_string(n) + " points");
    }
    util::Rng rng(config.seed);
    const auto picks = util::sample_distinct(rng, n, k);
    std::vector<double> values;
    values.reserve(k * d);
    for (auto p : picks) values.insert(values.end(), points.row(p).begin(), points.row(p).end());
    init = data::Dataset(k, d, std::move(values));
  }
  const std::size_t k = init.size();
  if (k == 0 || k > n) throw InvalidQuery("run_kmeans: need 1 <= K <= n");

  const std::size_t z_src =
      config.n_src_grp.value_or(detail::default_groups(n, std::sqrt(static_cast<double>(n)) / 2.0, 128));
  const std::size_t z_trg =
      config.n_trg_grp.value_or(detail::default_groups(k, static_cast<double>(k) / 2.0, k));
  const gti::GroupModel src_groups = gti::build_groups(points.view(), z_src, metric, config.seed);
  const gti::GroupModel trg_groups = gti::build_groups(init.view(), z_trg, metric, config.seed + 1);

  RunResult result;
  result.kind = plan.pipeline_kind;
  result.clusters = k;
  result.src_groups = z_src;
  result.trg_groups = z_trg;
  result.grouping_distances = src_groups.grouping_distances + trg_groups.grouping_distances;

  const detail::Packed packed = detail::pack(points, src_groups, config);
  result.layout = packed.plan;
  std::vector<double> centroids = init.values();
  std::vector<double> previous;
  gti::BoundState state = gti::BoundState::sized(n, z_src, z_trg);
  const std::size_t max_iter = plan.max_iter.value_or(config.max_iter);
  const gti::Query nearest = gti::Query::top_k(1);

  std::vector<std::uint32_t> assign(n);
  std::vector<double> best(n);

  for (std::size_t it = 0; it < max_iter; ++it) {
    IterationStats stats;
    stats.total_pairs = static_cast<std::uint64_t>(n) * k;

    gti::CandidateMatrix cm;
    gti::Drifts drifts;
    if (it == 0) {
      stats.bound_computations = src_groups.landmark_distances + trg_groups.landmark_distances;
      cm.targets.assign(z_src, {});
      cm.all_inside.assign(z_src, {});
      for (std::size_t a = 0; a < z_src; ++a) {
        if (src_groups.members[a].empty()) continue;
        for (std::size_t g = 0; g < z_trg; ++g) {
          if (!trg_groups.members[g].empty()) cm.targets[a].push_back(g);
        }
      }
    } else {
      drifts = gti::measure_drifts({previous, k, d}, {centroids, k, d}, trg_groups.group_of, z_trg,
                                   metric, stats.bound_computations);
      state.refresh_group_lb(src_groups);
      cm = gti::filter_iterative(state, src_groups, drifts, nearest);
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t g = 0; g < z_trg; ++g) {
          double& lb = state.point_lb[p * z_trg + g];
          lb = std::max(0.0, lb - drifts.group[g]);
        }
      }
    }

    for (std::size_t a = 0; a < z_src; ++a) {
      std::uint64_t kept = 0;
      for (std::size_t g : cm.targets[a]) kept += trg_groups.members[g].size();
      stats.pruned_group_pairs += src_groups.members[a].size() * (k - kept);
      stats.source_groups_active += cm.targets[a].empty() ? 0 : 1;
    }

    const auto runs = detail::make_runs(cm, config.layout_enabled);
    stats.candidate_runs = runs.size();
    std::fill(best.begin(), best.end(), std::numeric_limits<double>::infinity());
    std::fill(assign.begin(), assign.end(), std::numeric_limits<std::uint32_t>::max());

    const kernel::DistanceKernel kern(packed.data.view(), data::MatrixView(centroids, k, d), metric,
                                      config.kernel);
    std::vector<RunTally> tallies(runs.size());
    util::parallel_for(runs.size(), config.thread_count, [&](std::size_t r) {
      const auto& run = runs[r];
      std::vector<std::size_t> rows_all;
      for (std::size_t a : run) {
        rows_all.insert(rows_all.end(), packed.members[a].begin(), packed.members[a].end());
      }
      // Nearest-looking groups first so that best[p] tightens the upper bound early.
      std::vector<std::size_t> order = cm.targets[run.front()];
      if (it > 0) {
        std::vector<double> key(z_trg, std::numeric_limits<double>::infinity());
        for (std::size_t a : run) {
          for (std::size_t g : order) {
            key[g] = std::min(key[g], std::max(0.0, state.group_lb[a * z_trg + g] - drifts.group[g]));
          }
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) { return key[x] < key[y]; });
      }
      std::vector<std::size_t> rows;
      std::vector<double> buf;
      for (std::size_t g : order) {
        const auto& cols = trg_groups.members[g];
        rows.clear();
        for (std::size_t row : rows_all) {
          const std::size_t p = packed.orig[row];
          if (it > 0) {
            const double lb = state.point_lb[p * z_trg + g];
            const double ub = std::min(best[p], state.prev_best[p] + drifts.point[state.prev_owner[p]]);
            if (lb > gti::with_slack(ub)) {
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
          const std::size_t p = packed.orig[rows[i]];
          double group_min = std::numeric_limits<double>::infinity();
          for (std::size_t j = 0; j < cols.size(); ++j) {
            const double dist = buf[i * cols.size() + j];
            const double err = kern.error_bound(rows[i], cols[j], dist);
            group_min = std::min(group_min, std::max(0.0, dist - err));
            if (dist - err > best[p]) continue;
            // Candidates are ranked on the direct formula, as the oracle does.
            ++tallies[r].rechecks;
            const double exact =
                data::detail::raw_distance(packed.data.row(rows[i]), {centroids.data() + cols[j] * d, d}, metric);
            const auto c = static_cast<std::uint32_t>(cols[j]);
            if (exact < best[p] || (exact == best[p] && c < assign[p])) {
              best[p] = exact;
              assign[p] = c;
            }
          }
          state.point_lb[p * z_trg + g] = group_min;
        }
      }
    });
    kernel::KernelCounters iter_kernel;
    for (const auto& t : tallies) {
      stats.pruned_point_pairs += t.pruned_point;
      stats.exact_rechecks += t.rechecks;
      iter_kernel += t.kernel;
    }
    stats.point_distances = iter_kernel.point_distances;
    stats.tiles = iter_kernel.tiles_executed;
    stats.modeled_cycles = iter_kernel.modeled_cycles;
    result.kernel += iter_kernel;

    for (std::size_t p = 0; p < n; ++p) {
      state.prev_best[p] = best[p];
      state.prev_owner[p] = assign[p];
    }
    state.iterations_completed = it + 1;

    const bool changed = result.assignments.empty() || assign != result.assignments.back();
    result.assignments.push_back(assign);
    stats.status = changed;
    detail::finish_stats(stats);
    result.per_iteration.push_back(stats);
    if (!changed) {
      result.converged = true;
      break;
    }
    previous = centroids;
    centroids = data::mean_centroids(points.view(), assign, {previous, k, d});
  }
  result.centroids = std::move(centroids);
  detail::finish_result(result);
  result.wall_seconds = clock.seconds();

  if (config.oracle_mode == OracleMode::Shadow) {
    check_against_lloyd(result, points, init, metric, max_iter);
    result.oracle_checked = true;
  }
  return result;
}

}  // namespace accd::pipelines
