#include <gtest/gtest.h>

#include <sstream>

#include "accd/data/oracle.hpp"
#include "accd/data/synthetic.hpp"
#include "accd/ddsl/plan.hpp"
#include "accd/ddsl/templates.hpp"
#include "accd/error.hpp"
#include "accd/pipelines/pipelines.hpp"
#include "accd/pipelines/report.hpp"
#include "accd/util/rng.hpp"
#include "json.hpp"

namespace {

using namespace accd::pipelines;
using namespace accd::data;
using accd::ddsl::compile;

const MetricSpec kL2 = MetricSpec::unweighted(MetricKind::L2);

Dataset first_rows(const Dataset& ds, std::size_t k) {
  std::vector<double> v(ds.values().begin(), ds.values().begin() + static_cast<std::ptrdiff_t>(k * ds.dim()));
  return Dataset(k, ds.dim(), std::move(v));
}

void expect_conservation(const RunResult& r) {
  for (const auto& s : r.per_iteration) {
    EXPECT_EQ(s.point_distances + s.pruned_group_pairs + s.pruned_point_pairs + s.all_inside_pairs, s.total_pairs);
  }
}

void expect_kmeans_matches_lloyd(const RunResult& r, const Dataset& pts, const Dataset& init,
                                 const MetricSpec& m) {
  const LloydTrace t = naive_lloyd(pts.view(), init.view(), m, r.iterations);
  ASSERT_EQ(r.assignments.size(), t.assignments.size());
  for (std::size_t i = 0; i < t.assignments.size(); ++i) ASSERT_EQ(r.assignments[i], t.assignments[i]) << "iteration " << i;
  EXPECT_EQ(r.centroids, t.centroids);
  EXPECT_EQ(r.converged, t.converged);
}

TEST(Kmeans, PointsAtCentroidsConvergeInOneIteration) {
  std::vector<double> v;
  for (int rep = 0; rep < 20; ++rep) {
    for (int c = 0; c < 5; ++c) v.insert(v.end(), {10.0 * c, -3.0 * c});
  }
  const Dataset pts(100, 2, v);
  const Dataset init = first_rows(pts, 5);
  const RunResult r = run_kmeans(compile(accd::ddsl::kmeans_source(100, 5, 2)), pts, {}, init);
  // Stable after the first pass; the flag drops at the second.
  ASSERT_EQ(r.iterations, 2u);
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(r.per_iteration[1].status);
  EXPECT_EQ(r.assignments[1], r.assignments[0]);
  EXPECT_EQ(r.centroids, init.values());
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(r.assignments[0][i], i % 5);
}

TEST(Kmeans, MatchesLloydOnMixturesAndMetrics) {
  std::uint64_t seed = 1;
  for (const char* metric : {"Unweighted L2", "Unweighted L1"}) {
    const MetricSpec m = *MetricSpec::from_string(metric);
    for (const bool layout : {true, false}) {
      const Dataset pts = gaussian_mixture({3000, 6, 12, 1.0, 20.0}, seed++);
      const Dataset init = first_rows(gaussian_mixture({3000, 6, 12, 1.0, 20.0}, seed++), 16);
      RunConfig cfg;
      cfg.layout_enabled = layout;
      cfg.seed = seed;
      const RunResult r = run_kmeans(compile(accd::ddsl::kmeans_source(3000, 16, 6, metric)), pts, cfg, init);
      expect_kmeans_matches_lloyd(r, pts, init, m);
      expect_conservation(r);
    }
  }
}

TEST(Kmeans, WeightedMetricMatchesLloyd) {
  auto plan = compile(accd::ddsl::kmeans_source(1500, 8, 3, "Weighted L2"));
  bind_weights(plan, Dataset(1, 3, {0.5, 2.0, 1.0}));
  const Dataset pts = gaussian_mixture({1500, 3, 6, 1.0, 10.0}, 4);
  const Dataset init = first_rows(pts, 8);
  const RunResult r = run_kmeans(plan, pts, {}, init);
  expect_kmeans_matches_lloyd(r, pts, init, plan.metric);
}

TEST(Kmeans, PokerShapedSavesFromIterationTwo) {
  // Integer-valued features like the poker-hand records: 10 small categorical columns + a label.
  accd::util::Rng rng(5);
  std::vector<double> v;
  for (std::size_t i = 0; i < 5000; ++i) {
    for (std::size_t j = 0; j < 11; ++j) {
      v.push_back(static_cast<double>(accd::util::uniform_index(rng, j % 2 ? 13 : 4) + 1));
    }
  }
  const Dataset pts(5000, 11, v);
  RunConfig cfg;
  cfg.oracle_mode = OracleMode::Shadow;
  const RunResult r = run_kmeans(compile(accd::ddsl::kmeans_source(5000, 32, 11)), pts, cfg);
  EXPECT_TRUE(r.oracle_checked);
  ASSERT_GE(r.per_iteration.size(), 2u);
  for (std::size_t i = 1; i < r.per_iteration.size(); ++i) EXPECT_GT(r.per_iteration[i].measured_saving, 0.0) << i;
  EXPECT_EQ(r.per_iteration[0].measured_saving, 0.0);
}

TEST(Kmeans, SeparatedMixtureSavesHalfFromIterationTwo) {
  const Dataset pts = gaussian_mixture({8000, 8, 16, 0.5, 40.0}, 3);
  const RunResult r = run_kmeans(compile(accd::ddsl::kmeans_source(8000, 16, 8)), pts, {});
  for (std::size_t i = 1; i < r.per_iteration.size(); ++i) EXPECT_GE(r.per_iteration[i].measured_saving, 0.5) << i;
}

TEST(Kmeans, DeterministicAcrossThreadCounts) {
  const Dataset pts = gaussian_mixture({4000, 5, 10, 1.0, 15.0}, 8);
  const auto plan = compile(accd::ddsl::kmeans_source(4000, 12, 5));
  RunConfig one;
  one.seed = 17;
  RunConfig three = one;
  three.thread_count = 3;
  const RunResult a = run_kmeans(plan, pts, one);
  const RunResult b = run_kmeans(plan, pts, three);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.point_distances, b.point_distances);
  EXPECT_EQ(a.kernel, b.kernel);
  EXPECT_EQ(run_report_json(plan, one, a, std::nullopt, false),
            run_report_json(plan, one, run_kmeans(plan, pts, one), std::nullopt, false));
}

TEST(Kmeans, LayoutBatchesCandidateRuns) {
  const Dataset pts = gaussian_mixture({6000, 4, 8, 0.3, 50.0}, 2);
  const auto plan = compile(accd::ddsl::kmeans_source(6000, 16, 4));
  RunConfig on;
  RunConfig off;
  off.layout_enabled = false;
  const RunResult a = run_kmeans(plan, pts, on);
  const RunResult b = run_kmeans(plan, pts, off);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_TRUE(a.layout.has_value());
  EXPECT_FALSE(b.layout.has_value());
  bool batched = false;
  for (const auto& s : a.per_iteration) batched |= s.candidate_runs < s.source_groups_active;
  EXPECT_TRUE(batched);
  for (const auto& s : b.per_iteration) EXPECT_EQ(s.candidate_runs, s.source_groups_active);
}

TEST(Knn, UniformIsExact) {
  const Dataset src = uniform_points(2000, 6, 1);
  const Dataset trg = uniform_points(2000, 6, 2);
  const RunResult r = run_knn_join(compile(accd::ddsl::knn_source(2000, 2000, 6, 50)), src, trg, {});
  ASSERT_TRUE(r.topk.has_value());
  EXPECT_EQ(*r.topk, brute_knn(src, trg, kL2, 50, Scope::Smallest));
  expect_conservation(r);
}

TEST(Knn, LargestScopeAndL1AreExact) {
  const Dataset src = gaussian_mixture({700, 4, 5, 1.0, 10.0}, 3);
  const Dataset trg = gaussian_mixture({900, 4, 5, 1.0, 10.0}, 4);
  for (const bool layout : {true, false}) {
    RunConfig cfg;
    cfg.layout_enabled = layout;
    const RunResult r = run_knn_join(compile(accd::ddsl::knn_source(700, 900, 4, 7, "Unweighted L1", Scope::Largest)), src, trg, cfg);
    EXPECT_EQ(*r.topk, brute_knn(src, trg, MetricSpec::unweighted(MetricKind::L1), 7, Scope::Largest));
  }
}

TEST(Knn, TiedDistancesBreakByLowerId) {
  // Every target sits on a 3x3 integer grid, repeated, so distances tie constantly.
  std::vector<double> t;
  for (int rep = 0; rep < 30; ++rep) {
    for (int x = 0; x < 3; ++x) {
      for (int y = 0; y < 3; ++y) t.insert(t.end(), {double(x), double(y)});
    }
  }
  const Dataset trg(270, 2, t);
  const Dataset src = first_rows(trg, 40);
  const RunResult r = run_knn_join(compile(accd::ddsl::knn_source(40, 270, 2, 35)), src, trg, {});
  EXPECT_EQ(*r.topk, brute_knn(src, trg, kL2, 35, Scope::Smallest));
}

TEST(Knn, FarBlobsNeverCompareAcross) {
  std::vector<double> s, t;
  accd::util::Rng rng(9);
  for (int i = 0; i < 400; ++i) {
    const double off = i % 2 ? 1e4 : 0.0;
    s.insert(s.end(), {off + accd::util::uniform_unit(rng), off + accd::util::uniform_unit(rng)});
    t.insert(t.end(), {off + accd::util::uniform_unit(rng), off + accd::util::uniform_unit(rng)});
  }
  const Dataset src(400, 2, s), trg(400, 2, t);
  RunConfig cfg;
  cfg.n_src_grp = 2;
  cfg.n_trg_grp = 2;
  const RunResult r = run_knn_join(compile(accd::ddsl::knn_source(400, 400, 2, 10)), src, trg, cfg);
  EXPECT_EQ(*r.topk, brute_knn(src, trg, kL2, 10, Scope::Smallest));
  EXPECT_LE(r.point_distances, 200u * 200u * 2u);
  EXPECT_EQ(r.per_iteration[0].pruned_group_pairs, 200u * 200u * 2u);
}

TEST(Knn, SeparatedMixtureSavesHalf) {
  const Dataset both = gaussian_mixture({6000, 8, 30, 0.5, 30.0}, 12);
  std::vector<double> a(both.values().begin(), both.values().begin() + 3000 * 8);
  std::vector<double> b(both.values().begin() + 3000 * 8, both.values().end());
  const Dataset src(3000, 8, a), trg(3000, 8, b);
  RunConfig cfg;
  cfg.oracle_mode = OracleMode::Shadow;
  const RunResult r = run_knn_join(compile(accd::ddsl::knn_source(3000, 3000, 8, 20)), src, trg, cfg);
  EXPECT_GE(r.measured_saving, 0.5);
  EXPECT_EQ(r.bound_computations, 3000u + 3000u + r.src_groups * r.trg_groups);
}

TEST(Knn, KAboveTargetRowsIsRejected) {
  const Dataset src = uniform_points(10, 2, 1);
  const Dataset trg = uniform_points(5, 2, 2);
  const auto plan = compile(accd::ddsl::knn_source(10, 5, 2, 5));
  auto bigger = plan;
  bigger.select.k = 6;
  EXPECT_THROW(conform_plan(bigger, src, trg, false), accd::RangeError);
  EXPECT_THROW(conform_plan(plan, src, std::nullopt, false), accd::InvalidQuery);
  EXPECT_THROW(conform_plan(plan, uniform_points(11, 2, 1), trg, false), accd::DimensionMismatch);
  EXPECT_EQ(conform_plan(plan, uniform_points(11, 2, 1), trg, true).source_set.size, 11u);
}

TEST(Nbody, SmallSystemMatchesRadiusOracleEveryStep) {
  const Dataset pts = gaussian_mixture({100, 3, 3, 0.2, 2.0}, 6);
  const double r = radius_for_neighbors(pts, 10, 100, 1);
  for (const bool layout : {true, false}) {
    RunConfig cfg;
    cfg.layout_enabled = layout;
    cfg.dt = 1e-2;
    const RunResult res = run_nbody(compile(accd::ddsl::nbody_source(100, 3, 5, r)), pts, cfg);
    ASSERT_EQ(res.neighbors.size(), 5u);
    for (std::size_t s = 0; s < 5; ++s) EXPECT_EQ(res.neighbors[s], brute_radius(res.trajectory[s], kL2, r)) << s;
    expect_conservation(res);
  }
}

TEST(Nbody, FrozenSystemNeedsNoDistancesAfterStepOne) {
  const Dataset pts = gaussian_mixture({500, 2, 4, 0.3, 5.0}, 7);
  RunConfig cfg;
  cfg.dt = 0.0;
  const RunResult r = run_nbody(compile(accd::ddsl::nbody_source(500, 2, 4, 0.5)), pts, cfg);
  ASSERT_EQ(r.per_iteration.size(), 4u);
  EXPECT_GT(r.per_iteration[0].point_distances, 0u);
  for (std::size_t s = 1; s < 4; ++s) {
    EXPECT_EQ(r.per_iteration[s].point_distances, 0u) << s;
    EXPECT_EQ(r.neighbors[s], r.neighbors[0]);
  }
}

TEST(Nbody, ClusteredSystemSavesHalfByStepThree) {
  const Dataset pts = gaussian_mixture({4096, 3, 16, 0.05, 1.0}, 10);
  const double r = radius_for_neighbors(pts, 50, 256, 3);
  const RunResult res = run_nbody(compile(accd::ddsl::nbody_source(4096, 3, 3, r)), pts, {});
  ASSERT_EQ(res.per_iteration.size(), 3u);
  EXPECT_GT(res.per_iteration[2].measured_saving, 0.5);
}

TEST(Nbody, RejectsCountSelectionAndTargets) {
  auto plan = compile(accd::ddsl::nbody_source(50, 2, 2, 0.5));
  const Dataset pts = uniform_points(50, 2, 1);
  EXPECT_THROW(conform_plan(plan, pts, pts, false), accd::InvalidQuery);
  plan.select = {accd::ddsl::Selection::Kind::Count, 3, 0.0, Scope::Smallest};
  EXPECT_THROW(run_nbody(plan, pts, {}), accd::InvalidQuery);
}

TEST(Run, DispatchAndConfigChecks) {
  const Dataset pts = uniform_points(200, 2, 1);
  const auto plan = compile(accd::ddsl::kmeans_source(200, 4, 2));
  EXPECT_THROW(run_knn_join(plan, pts, pts, {}), accd::InvalidQuery);
  RunConfig bad;
  bad.thread_count = 0;
  EXPECT_THROW(run(plan, pts, std::nullopt, bad), accd::RangeError);
  const RunResult r = run(plan, pts, first_rows(pts, 4), {});
  EXPECT_EQ(r.kind, accd::ddsl::PipelineKind::IterativeTwoSet);
}

TEST(Report, ShapeAndCsv) {
  const Dataset src = uniform_points(30, 2, 1);
  const Dataset trg = uniform_points(20, 2, 2);
  const auto plan = compile(accd::ddsl::knn_source(30, 20, 2, 3));
  const RunConfig cfg;
  const RunResult r = run_knn_join(plan, src, trg, cfg);
  const auto j = nlohmann::json::parse(run_report_json(plan, cfg, r, std::string("out.csv")));
  EXPECT_EQ(j["schema"], kRunReportSchema);
  EXPECT_EQ(j["outputs_path"], "out.csv");
  EXPECT_EQ(j["plan"]["pipeline_kind"], "oneshot_two_set");
  EXPECT_EQ(j["layout"]["point_perm"].size(), 30u);
  EXPECT_TRUE(j.contains("wall_seconds"));
  EXPECT_FALSE(nlohmann::json::parse(run_report_json(plan, cfg, r, std::nullopt, false)).contains("wall_seconds"));
  std::ostringstream csv;
  write_outputs_csv(csv, r);
  std::string first;
  std::istringstream lines(csv.str());
  std::getline(lines, first);
  EXPECT_EQ(first, "point_id,rank,neighbor_id,distance");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 90u);
}

}  // namespace
