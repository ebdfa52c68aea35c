#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "json.hpp"

#include "accd/error.hpp"
#include "accd/explorer/explorer.hpp"
#include "accd/explorer/json.hpp"
#include "accd/explorer/model.hpp"
#include "accd/util/rng.hpp"
#include "paths.hpp"

namespace {

using namespace accd::explorer;

PlatformSpec synthetic_platform() {
  return load_platform(accd::testing::source_dir() / "share/platforms/synthetic.platform");
}

ProblemSpec shipped_problem() {
  return problem_from_json(accd::testing::read_file(accd::testing::source_dir() / "share/explorer/kmeans_problem.json"));
}

Domains shipped_domains() {
  return domains_from_json(accd::testing::read_file(accd::testing::source_dir() / "share/explorer/domains.json"));
}

PlatformSpec table_platform(ResourceUsage single, double mem_max) {
  PlatformSpec p;
  p.frequency = 1.0;
  p.bw_max = std::numeric_limits<double>::max();
  p.mem_max = mem_max;
  p.cu_max = 1e18;
  p.lu_max = 1e18;
  p.resource_table[{128, 1, 1}] = single;
  return p;
}

TEST(SavingRatio, Examples) {
  const ProblemSpec p{10000, 1000, 8, 5, 10.0, 32};
  const SavingRatio r = model_saving_ratio(p, {100, 10, 64, 4, 4});
  EXPECT_DOUBLE_EQ(r.raw, 50.0);
  EXPECT_EQ(r.clamped, 1.0);
  EXPECT_DOUBLE_EQ(model_saving_ratio({10000, 1000, 8, 5, 20.0, 32}, {100, 10, 64, 4, 4}).raw, 25.0);
  EXPECT_DOUBLE_EQ(model_saving_ratio({40, 30, 8, 3, 3.0, 32}, {40, 30, 64, 4, 4}).raw, 1.0);
  const SavingRatio small = model_saving_ratio({100, 100, 1, 1, 1000.0, 32}, {1, 1, 1, 1, 1});
  EXPECT_DOUBLE_EQ(small.raw, 0.1);
  EXPECT_DOUBLE_EQ(small.clamped, 0.1);
}

TEST(Latency, Examples) {
  const Latency ones = model_latency({1, 1, 1, 1, 1.0, 32}, {1, 1, 1, 1, 1}, 1.0, 0.3);
  EXPECT_EQ(ones.filt, 1.0);
  EXPECT_EQ(ones.comp, 0.3);
  EXPECT_EQ(ones.total, ones.filt + ones.comp);

  const ProblemSpec p{10000, 1000, 32, 10, 1.0, 32};
  const Latency l = model_latency(p, {100, 10, 64, 4, 4}, 200e6, 1.0);
  EXPECT_NEAR(l.comp, 2.44140625e-5, 1e-15);
  EXPECT_DOUBLE_EQ(l.filt, 100.0 * 10.0 * 10000.0 * 1000.0 * 32.0 / 10.0);
}

TEST(Latency, MonotoneOverSweep) {
  const ProblemSpec p{5000, 300, 16, 7, 1.0, 32};
  for (const std::size_t blk : {8, 16, 64}) {
    for (const std::size_t simd : {1, 2, 4}) {
      for (const std::size_t unroll : {1, 4, 8}) {
        for (const double ratio : {0.1, 0.5, 1.0}) {
          const DesignConfig c{32, 8, blk, simd, unroll};
          const Latency base = model_latency(p, c, 2e8, ratio);
          EXPECT_EQ(base.total, base.filt + base.comp);
          DesignConfig s = c, u = c, b = c, g = c;
          s.simd *= 2;
          u.unroll *= 2;
          b.blk *= 2;
          g.n_src_grp *= 2;
          const Latency ls = model_latency(p, s, 2e8, ratio);
          const Latency lu = model_latency(p, u, 2e8, ratio);
          const Latency lb = model_latency(p, b, 2e8, ratio);
          const Latency lg = model_latency(p, g, 2e8, ratio);
          EXPECT_DOUBLE_EQ(ls.comp, base.comp / 2);
          EXPECT_DOUBLE_EQ(lu.comp, base.comp / 2);
          EXPECT_DOUBLE_EQ(lb.comp, base.comp / 4);
          EXPECT_EQ(ls.filt, base.filt);
          EXPECT_GT(lg.filt, base.filt);
          EXPECT_EQ(lg.comp, base.comp);
        }
      }
    }
  }
}

TEST(Bandwidth, Examples) {
  const ProblemSpec p32{600, 400, 10, 1, 1.0, 32};
  EXPECT_DOUBLE_EQ(model_bandwidth(p32, 1.0), 40000.0);
  EXPECT_DOUBLE_EQ(model_bandwidth(p32, 2.0), 20000.0);
  const ProblemSpec p64{600, 400, 10, 1, 1.0, 64};
  EXPECT_DOUBLE_EQ(model_bandwidth(p64, 1.0), 80000.0);
  EXPECT_THROW(model_bandwidth(p32, 0.0), accd::DivisionGuard);
}

TEST(Resources, Examples) {
  const PlatformSpec plat = table_platform({3, 2, 1}, 1e9);
  const ResourceUsage r = estimate_resources({1000, 500, 4, 1, 1.0, 32}, {1, 1, 128, 1, 1}, plat);
  EXPECT_EQ(r.mem, 96.0);
  EXPECT_EQ(r.dsp, 64.0);
  EXPECT_EQ(r.alm, 32.0);
  EXPECT_EQ(estimate_resources({100, 90, 4, 1, 1.0, 32}, {1, 1, 128, 1, 1}, plat), (ResourceUsage{3, 2, 1}));
  EXPECT_EQ(estimate_resources({256, 100, 4, 1, 1.0, 32}, {1, 1, 128, 1, 1}, plat).mem, 6.0);
  EXPECT_THROW(estimate_resources({1, 1, 1, 1, 1.0, 32}, {1, 1, 64, 1, 1}, plat), accd::TableMiss);
}

TEST(Constraints, Examples) {
  const PlatformSpec plat = table_platform({0, 0, 0}, 10.0);
  ModelReport zero;
  validate_constraints(zero, plat);
  EXPECT_TRUE(zero.feasible);

  ModelReport at_limit;
  at_limit.resources.mem = 10.0;
  validate_constraints(at_limit, plat);
  EXPECT_TRUE(at_limit.feasible);

  PlatformSpec bw = plat;
  bw.bw_max = 1000.0;
  ModelReport over;
  over.bw_required = 1010.0;
  validate_constraints(over, bw);
  EXPECT_FALSE(over.feasible);
  ASSERT_EQ(over.violated.size(), 1u);
  EXPECT_EQ(over.violated[0].constraint, Constraint::Bandwidth);
  EXPECT_NEAR(over.violated[0].margin, 0.01, 1e-12);

  PlatformSpec none = plat;
  none.mem_max = 0.0;
  ModelReport some;
  some.resources.mem = 1.0;
  validate_constraints(some, none);
  ASSERT_EQ(some.violated.size(), 1u);
  EXPECT_TRUE(std::isinf(some.violated[0].margin));
}

TEST(Evaluate, AdditiveAndConsistent) {
  const PlatformSpec plat = synthetic_platform();
  const ProblemSpec p = shipped_problem();
  for (const auto& c : shipped_domains().enumerate()) {
    const ModelReport r = evaluate(p, c, plat);
    ASSERT_EQ(r.latency_total, r.latency_filt + r.latency_comp);
    ASSERT_EQ(r.feasible, r.violated.empty());
    ASSERT_LE(r.ratio_save_model, 1.0);
  }
}

TEST(FitAlpha, ReproducesMeasuredSaving) {
  const ProblemSpec p{20000, 64, 32, 20, 1.0, 32};
  const DesignConfig c{64, 8, 64, 4, 4};
  const double alpha = fit_alpha(p, c, 0.8);
  ProblemSpec fitted = p;
  fitted.alpha = alpha;
  EXPECT_NEAR(model_saving_ratio(fitted, c).raw, 0.8, 1e-12);
}

TEST(PlatformFiles, ParseAndReject) {
  const PlatformSpec plat = synthetic_platform();
  EXPECT_EQ(plat.frequency, 200e6);
  EXPECT_EQ(plat.mem_max, 1537.0);
  EXPECT_EQ(plat.resource_table.size(), 125u);
  EXPECT_THROW(parse_resource_table("blk,simd\n"), accd::FormatError);
  EXPECT_THROW(parse_resource_table("blk,simd,unroll,mem_blocks,dsp,alm\n1,1,1,1,1\n"), accd::FormatError);
  EXPECT_THROW(parse_resource_table("blk,simd,unroll,mem_blocks,dsp,alm\n1,1,1,1,1,x\n"), accd::FormatError);
  EXPECT_THROW(load_platform("/nonexistent.platform"), accd::IoError);
}

TEST(Domains, Checks) {
  Domains d{{1}, {1}, {16}, {1, 2}, {1}};
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.enumerate().size(), 2u);
  d.simd = {2, 2};
  EXPECT_THROW(d.check(), accd::RangeError);
  d.simd = {};
  EXPECT_THROW(d.check(), accd::RangeError);
  GaParams ga;
  ga.population = 3;
  EXPECT_THROW(ga.check(), accd::RangeError);
}

TEST(Explore, SingleFeasiblePointFoundInFirstGeneration) {
  PlatformSpec plat = synthetic_platform();
  const ProblemSpec p = shipped_problem();
  // blk=16 needs more ALMs than the platform has.
  Domains d{{16}, {2}, {16, 256}, {1}, {1}};
  ASSERT_FALSE(evaluate(p, {16, 2, 16, 1, 1}, plat).feasible);
  const ExploreResult r = explore(p, plat, d, {}, 1);
  EXPECT_EQ(r.best, (DesignConfig{16, 2, 256, 1, 1}));
  ASSERT_FALSE(r.history.empty());
  EXPECT_TRUE(r.history[0].best.has_value());
  EXPECT_EQ(*r.history[0].best, r.report.latency_total);
}

TEST(Explore, NoMemoryMeansNoFeasibleConfig) {
  const PlatformSpec plat = load_platform(accd::testing::source_dir() / "share/platforms/no_memory.platform");
  try {
    explore(shipped_problem(), plat, shipped_domains(), {}, 3);
    FAIL() << "expected NoFeasibleConfig";
  } catch (const NoFeasibleConfig& e) {
    EXPECT_FALSE(e.report().feasible);
    EXPECT_FALSE(e.history().empty());
    const auto j = nlohmann::json::parse(no_feasible_to_json(e));
    EXPECT_EQ(j["error"], "no_feasible_config");
  }
}

TEST(Explore, TableMissIsReportedUpFront) {
  PlatformSpec plat = synthetic_platform();
  Domains d{{16}, {2}, {17}, {1}, {1}};
  EXPECT_THROW(explore(shipped_problem(), plat, d, {}, 1), accd::TableMiss);
}

TEST(Explore, DeterministicAndElitist) {
  const PlatformSpec plat = synthetic_platform();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ExploreResult a = explore(shipped_problem(), plat, shipped_domains(), {}, seed);
    const ExploreResult b = explore(shipped_problem(), plat, shipped_domains(), {}, seed);
    EXPECT_EQ(explore_to_json(a), explore_to_json(b));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : a.history) {
      if (!g.best) continue;
      EXPECT_LE(*g.best, best);
      best = *g.best;
    }
    EXPECT_EQ(best, a.report.latency_total);
  }
}

TEST(Explore, JsonRoundTripOfInputs) {
  const GaParams ga = ga_from_json(R"({"population": 8, "mutation": 0.5, "max_generations": 3})");
  EXPECT_EQ(ga.population, 8u);
  EXPECT_EQ(ga.mutation, 0.5);
  EXPECT_EQ(ga.max_generations, 3u);
  EXPECT_EQ(ga.crossover, GaParams{}.crossover);
  EXPECT_THROW(problem_from_json(R"({"src_size": 1})"), accd::FormatError);
  EXPECT_THROW(domains_from_json("[1,2]"), accd::FormatError);
  EXPECT_THROW(problem_from_json(R"({"src_size": -1, "trg_size": 1, "d": 1, "n_iteration": 1})"), accd::FormatError);
}

}  // namespace
