#include <algorithm>
#include <cstdint>
#include <map>
#include <string>

#include "accd/data/oracle.hpp"
#include "accd/gti/bounds.hpp"
#include "accd/util/parallel.hpp"
#include "common.hpp"

namespace accd::pipelines {

namespace {

/// Distance brackets of one boundary group pair (kernel value +- its error bound, or the
/// exact value), with the cumulative drift of both points when each was taken.
struct PairCache {
  std::vector<double> d_lo;  // |A| x |B|
  std::vector<double> d_hi;
  std::vector<double> s_ref;
};

struct RunTally {
  std::uint64_t pruned_point = 0;
  std::uint64_t inside = 0;
  std::uint64_t rechecks = 0;
  kernel::KernelCounters kernel;
};

void check_against_radius(const RunResult& r, double radius, const data::MetricSpec& metric) {
  for (std::size_t step = 0; step < r.trajectory.size(); ++step) {
    const auto want = data::brute_radius(r.trajectory[step], metric, radius);
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (want[i] != r.neighbors[step][i]) {
        throw OracleMismatch("n-body step " + std::to_string(step + 1) + ", particle " + std::to_string(i) +
                             ": pipeline has " + std::to_string(r.neighbors[step][i].size()) +
                             " neighbors, oracle has " + std::to_string(want[i].size()));
      }
    }
  }
}

}  // namespace

ForceRule softened_attraction(double softening) {
  const double eps2 = softening * softening;
  return [eps2](data::MatrixView x, std::size_t self, std::span<const std::size_t> neighbors,
                std::span<double> accel) {
    const auto xi = x.row(self);
    std::fill(accel.begin(), accel.end(), 0.0);
    for (std::size_t j : neighbors) {
      const auto xj = x.row(j);
      double r2 = eps2;
      for (std::size_t c = 0; c < xi.size(); ++c) r2 += (xj[c] - xi[c]) * (xj[c] - xi[c]);
      const double inv = 1.0 / (r2 * std::sqrt(r2));
      for (std::size_t c = 0; c < xi.size(); ++c) accel[c] += (xj[c] - xi[c]) * inv;
    }
  };
}

RunResult run_nbody(const ddsl::ExecutionPlan& plan, const data::Dataset& particles,
                    const RunConfig& config, std::optional<std::vector<double>> initial_velocities) {
  if (plan.pipeline_kind != ddsl::PipelineKind::IterativeSelfSet) {
    throw InvalidQuery("run_nbody: plan is " + std::string(ddsl::pipeline_kind_name(plan.pipeline_kind)));
  }
  const double radius = plan.select.radius;
  if (plan.select.kind != ddsl::Selection::Kind::Radius || plan.select.scope != data::Scope::Smallest) {
    throw InvalidQuery("run_nbody: self-set iteration needs a \"smallest\" radius selection");
  }
  if (!(radius > 0.0)) {
    throw RangeError("run_nbody: radius must be > 0");
  }
  config.check();
  detail::Stopwatch clock;
  const std::size_t n = particles.size();
  const std::size_t d = particles.dim();
  const data::MetricSpec& metric = plan.metric;
  metric.check(d);
  if (n == 0) throw RangeError("run_nbody: no particles");

  std::vector<double> pos = particles.values();
  std::vector<double> vel = initial_velocities.value_or(std::vector<double>(n * d, 0.0));
  if (vel.size() != n * d) throw SizeMismatch("run_nbody: velocity array must be n x d");
  const ForceRule force = config.force ? config.force : softened_attraction(config.softening);

  const std::size_t z =
      config.n_src_grp.value_or(detail::default_groups(n, std::sqrt(static_cast<double>(n)), 256));
  const gti::GroupModel gm = gti::build_groups(particles.view(), z, metric, config.seed);
  gti::GroupPairBounds bounds = gti::compute_group_pair_bounds(gm, gm, metric);

  RunResult result;
  result.kind = plan.pipeline_kind;
  result.src_groups = z;
  result.trg_groups = z;
  result.grouping_distances = gm.grouping_distances;

  // Landmarks stay put; offsets and cumulative drift are traced per original particle.
  std::vector<double> p2l = gm.point_to_landmark;
  std::vector<double> drift_sum(n, 0.0);
  std::vector<double> group_radius(z, 0.0);
  std::vector<std::map<std::size_t, PairCache>> cache(z);

  std::optional<layout::LayoutPlan> lp;
  std::vector<std::vector<std::size_t>> members = gm.members;
  std::vector<std::size_t> orig(n);
  std::iota(orig.begin(), orig.end(), std::size_t{0});
  if (config.layout_enabled) {
    lp = layout::pack_intra_group(particles, gm, config.n_banks);
    for (std::size_t g = 0; g < z; ++g) std::iota(members[g].begin(), members[g].end(), lp->group_begin[g]);
    orig = lp->point_perm;
  }
  result.layout = lp;

  const std::size_t steps = plan.max_iter.value_or(config.max_iter);
  for (std::size_t step = 0; step < steps; ++step) {
    IterationStats stats;
    stats.total_pairs = static_cast<std::uint64_t>(n) * n;
    stats.bound_computations = step == 0 ? gm.landmark_distances + bounds.landmark_pair_distances : 0;

    const data::Dataset current(n, d, pos, particles.ids());
    const data::Dataset work = lp ? layout::apply_layout(current, *lp) : current;

    for (std::size_t g = 0; g < z; ++g) {
      group_radius[g] = 0.0;
      for (std::size_t p : gm.members[g]) group_radius[g] = std::max(group_radius[g], p2l[p]);
    }
    gti::refresh_group_pair_bounds(bounds, group_radius, group_radius);
    const gti::OneshotFilter filt = gti::filter_oneshot(gm, gm, bounds, gti::Query::within(radius));
    const gti::CandidateMatrix& cm = filt.candidates;

    gti::CandidateMatrix plan_cm = cm;
    if (step == 0) {
      // The first step evaluates every pair; the filter only decides what gets cached.
      for (std::size_t a = 0; a < z; ++a) {
        plan_cm.targets[a].clear();
        plan_cm.all_inside[a].clear();
        if (gm.members[a].empty()) continue;
        for (std::size_t b = 0; b < z; ++b) {
          if (!gm.members[b].empty()) plan_cm.targets[a].push_back(b);
        }
      }
    }
    for (std::size_t a = 0; a < z; ++a) {
      std::uint64_t kept = 0;
      for (std::size_t b : plan_cm.targets[a]) kept += gm.members[b].size();
      stats.pruned_group_pairs += gm.members[a].size() * (n - kept);
      stats.source_groups_active += plan_cm.targets[a].empty() ? 0 : 1;
      // Pairs that left the boundary lose their cache.
      for (auto it = cache[a].begin(); it != cache[a].end();) {
        const bool boundary = std::binary_search(cm.targets[a].begin(), cm.targets[a].end(), it->first) &&
                              !cm.is_all_inside(a, it->first);
        it = boundary ? std::next(it) : cache[a].erase(it);
      }
    }
    const auto runs = detail::make_runs(plan_cm, config.layout_enabled);
    stats.candidate_runs = runs.size();

    const kernel::DistanceKernel kern(work.view(), work.view(), metric, config.kernel);
    std::vector<std::vector<std::size_t>> near(n);  // per work row: neighbor work rows
    std::vector<RunTally> tallies(runs.size());

    util::parallel_for(runs.size(), config.thread_count, [&](std::size_t r) {
      const auto& run = runs[r];
      RunTally& tally = tallies[r];
      std::vector<double> buf;
      for (std::size_t b : plan_cm.targets[run.front()]) {
        const auto& cols_all = members[b];
        const std::size_t nb = cols_all.size();
        // Per source group in the run: 0 = decided out, 1 = decided in, 2 = needs a distance.
        std::vector<std::vector<unsigned char>> verdict(run.size());
        std::vector<unsigned char> row_needed;
        std::vector<unsigned char> col_needed(nb, 0);
        std::vector<std::size_t> rows;
        for (std::size_t ai = 0; ai < run.size(); ++ai) {
          const std::size_t a = run[ai];
          const auto& rows_a = members[a];
          auto& v = verdict[ai];
          const bool inside = step > 0 && cm.is_all_inside(a, b);
          const auto found = cache[a].find(b);
          const PairCache* pc = (step > 0 && found != cache[a].end()) ? &found->second : nullptr;
          v.assign(rows_a.size() * nb, inside ? 1 : 2);
          if (inside) {
            tally.inside += rows_a.size() * nb;
            continue;
          }
          for (std::size_t i = 0; i < rows_a.size(); ++i) {
            bool any = false;
            for (std::size_t j = 0; j < nb; ++j) {
              if (pc) {
                const double ds = drift_sum[orig[rows_a[i]]] + drift_sum[orig[cols_all[j]]] - pc->s_ref[i * nb + j];
                const double lb = gti::two_landmark_bounds(pc->d_lo[i * nb + j], ds, 0.0).lb;
                const double ub = gti::two_landmark_bounds(pc->d_hi[i * nb + j], ds, 0.0).ub;
                if (lb > gti::with_slack(radius)) {
                  v[i * nb + j] = 0;
                } else if (gti::with_slack(ub) <= radius) {
                  v[i * nb + j] = 1;
                }
              }
              if (v[i * nb + j] == 2) {
                any = true;
                col_needed[j] = 1;
              }
            }
            row_needed.push_back(any ? 1 : 0);
            if (any) rows.push_back(rows_a[i]);
          }
          if (found == cache[a].end() && !cm.is_all_inside(a, b) &&
              std::binary_search(cm.targets[a].begin(), cm.targets[a].end(), b)) {
            const std::size_t cells = rows_a.size() * nb;
            cache[a][b] = PairCache{std::vector<double>(cells), std::vector<double>(cells), std::vector<double>(cells)};
          }
        }

        std::vector<std::size_t> cols;
        std::vector<std::size_t> col_slot(nb, SIZE_MAX);
        for (std::size_t j = 0; j < nb; ++j) {
          if (col_needed[j]) {
            col_slot[j] = cols.size();
            cols.push_back(cols_all[j]);
          }
        }
        if (!rows.empty()) {
          buf.resize(rows.size() * cols.size());
          kern.compute(rows, cols, buf, tally.kernel);
        }

        std::size_t row_cursor = 0;  // index into row_needed across the run
        std::size_t computed_row = 0;
        for (std::size_t ai = 0; ai < run.size(); ++ai) {
          const std::size_t a = run[ai];
          const auto& rows_a = members[a];
          auto& v = verdict[ai];
          const bool inside = step > 0 && cm.is_all_inside(a, b);
          const auto found = cache[a].find(b);
          PairCache* pc = found != cache[a].end() ? &found->second : nullptr;
          for (std::size_t i = 0; i < rows_a.size(); ++i) {
            const bool row_done = !inside && row_needed[row_cursor++];
            for (std::size_t j = 0; j < nb; ++j) {
              bool in = v[i * nb + j] == 1;
              if (row_done && col_slot[j] != SIZE_MAX) {
                const double dist = buf[computed_row * cols.size() + col_slot[j]];
                const double err = kern.error_bound(rows_a[i], cols_all[j], dist);
                double lo = dist - err;
                double hi = dist + err;
                if (lo <= radius && hi > radius) {
                  lo = hi = data::detail::raw_distance(work.row(rows_a[i]), work.row(cols_all[j]), metric);
                  ++tally.rechecks;
                }
                in = hi <= radius;
                if (pc) {
                  pc->d_lo[i * nb + j] = lo;
                  pc->d_hi[i * nb + j] = hi;
                  pc->s_ref[i * nb + j] = drift_sum[orig[rows_a[i]]] + drift_sum[orig[cols_all[j]]];
                }
              } else if (!inside) {
                (v[i * nb + j] == 1 ? tally.inside : tally.pruned_point) += 1;
              }
              if (in) near[rows_a[i]].push_back(cols_all[j]);
            }
            if (row_done) ++computed_row;
          }
        }
      }
    });

    kernel::KernelCounters step_kernel;
    for (const auto& t : tallies) {
      stats.pruned_point_pairs += t.pruned_point;
      stats.all_inside_pairs += t.inside;
      stats.exact_rechecks += t.rechecks;
      step_kernel += t.kernel;
    }
    stats.point_distances = step_kernel.point_distances;
    stats.tiles = step_kernel.tiles_executed;
    stats.modeled_cycles = step_kernel.modeled_cycles;
    result.kernel += step_kernel;

    std::vector<std::vector<std::size_t>> lists(n);
    for (std::size_t row = 0; row < n; ++row) {
      auto& out = lists[orig[row]];
      const std::size_t self = work.id(row);
      for (std::size_t col : near[row]) {
        if (work.id(col) != self) out.push_back(work.id(col));
      }
      std::sort(out.begin(), out.end());
    }
    result.trajectory.push_back(current);

    // Explicit Euler with accelerations from the positions at the start of the step.
    std::vector<std::size_t> row_of_id(n);
    for (std::size_t i = 0; i < n; ++i) row_of_id[particles.id(i)] = i;
    std::vector<double> accel(n * d);
    const data::MatrixView x(pos, n, d);
    std::vector<std::size_t> nb_rows;
    for (std::size_t i = 0; i < n; ++i) {
      nb_rows.clear();
      for (std::size_t id : lists[i]) nb_rows.push_back(row_of_id[id]);
      force(x, i, nb_rows, std::span<double>(accel).subspan(i * d, d));
    }
    std::vector<double> next(pos.size());
    for (std::size_t c = 0; c < pos.size(); ++c) next[c] = pos[c] + config.dt * vel[c];
    for (std::size_t c = 0; c < pos.size(); ++c) vel[c] += config.dt * accel[c];
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double dr = data::detail::raw_distance(x.row(i), {next.data() + i * d, d}, metric);
      p2l[i] += dr;
      drift_sum[i] += dr;
      moved |= dr > 0.0;
    }
    data::global_distance_counter().add(n);
    stats.bound_computations += n;
    pos = std::move(next);

    result.neighbors.push_back(std::move(lists));
    stats.status = moved;
    detail::finish_stats(stats);
    result.per_iteration.push_back(stats);
    if (plan.exit_status && !moved) {
      result.converged = true;
      break;
    }
  }
  detail::finish_result(result);
  result.wall_seconds = clock.seconds();

  if (config.oracle_mode == OracleMode::Shadow) {
    check_against_radius(result, radius, metric);
    result.oracle_checked = true;
  }
  return result;
}

}  // namespace accd::pipelines
