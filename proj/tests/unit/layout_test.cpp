#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "accd/data/synthetic.hpp"
#include "accd/error.hpp"
#include "accd/gti/filter.hpp"
#include "accd/gti/groups.hpp"
#include "accd/layout/layout.hpp"
#include "accd/util/rng.hpp"

namespace {

using namespace accd::layout;
using accd::data::Dataset;
using accd::gti::CandidateMatrix;
using accd::gti::GroupModel;

CandidateMatrix figure_candidates() {
  CandidateMatrix cm;
  cm.targets.resize(7);
  cm.all_inside.resize(7);
  cm.targets[1] = {1, 4, 6};
  cm.targets[2] = {8, 10, 12};
  cm.targets[5] = {2, 4, 6};
  cm.targets[6] = {8, 10, 12};
  return cm;
}

GroupModel explicit_groups(const Dataset& ds, const std::vector<std::size_t>& group_of, std::size_t z) {
  std::vector<double> landmarks(z * ds.dim(), 0.0);
  return accd::gti::groups_from_assignment(ds.view(), landmarks, group_of, z,
                                           accd::data::MetricSpec::unweighted(accd::data::MetricKind::L2));
}

TEST(InterGroup, IdenticalListsBecomeAdjacent) {
  const CandidateMatrix cm = figure_candidates();
  const auto order = reorder_inter_group(cm);
  EXPECT_EQ(order, (std::vector<std::size_t>{0, 3, 4, 1, 5, 2, 6}));
  const auto runs = candidate_runs(cm, order);
  EXPECT_EQ(runs, (std::vector<std::vector<std::size_t>>{{1}, {5}, {2, 6}}));
}

TEST(InterGroup, IdenticalListsKeepIdOrder) {
  CandidateMatrix cm;
  cm.targets.assign(5, {0, 3});
  cm.all_inside.resize(5);
  const auto order = reorder_inter_group(cm);
  EXPECT_EQ(order, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(candidate_runs(cm, order).size(), 1u);
}

TEST(InterGroup, MatchesReferenceSort) {
  accd::util::Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    CandidateMatrix cm;
    const std::size_t z = 1 + accd::util::uniform_index(rng, 40);
    cm.targets.resize(z);
    cm.all_inside.resize(z);
    for (auto& t : cm.targets) {
      for (std::size_t g = 0; g < 6; ++g) {
        if (accd::util::uniform_index(rng, 2)) t.push_back(g);
      }
    }
    std::vector<std::size_t> want(z);
    std::iota(want.begin(), want.end(), std::size_t{0});
    std::sort(want.begin(), want.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(cm.targets[a], a) < std::tie(cm.targets[b], b);
    });
    const auto order = reorder_inter_group(cm);
    ASSERT_EQ(order, want);
    const auto runs = candidate_runs(cm, order);
    for (const auto& run : runs) {
      ASSERT_FALSE(cm.targets[run.front()].empty());
      for (const auto s : run) ASSERT_EQ(cm.targets[s], cm.targets[run.front()]);
    }
    for (std::size_t i = 1; i < runs.size(); ++i) {
      ASSERT_NE(cm.targets[runs[i].front()], cm.targets[runs[i - 1].front()]);
    }
  }
}

TEST(IntraGroup, FigureMapping) {
  // Point k of the figure is row k - 1.
  std::vector<double> values(9);
  std::iota(values.begin(), values.end(), 1.0);
  const Dataset ds(9, 1, values);
  std::vector<std::size_t> group_of(9);
  for (const std::size_t id : {3, 8, 9}) group_of[id - 1] = 0;
  for (const std::size_t id : {5, 6, 7}) group_of[id - 1] = 1;
  for (const std::size_t id : {1, 2, 4}) group_of[id - 1] = 2;
  const LayoutPlan plan = pack_intra_group(ds, explicit_groups(ds, group_of, 3), 1);
  const Dataset packed = apply_layout(ds, plan);
  std::vector<std::size_t> order;
  for (const auto id : packed.ids()) order.push_back(id + 1);
  EXPECT_EQ(order, (std::vector<std::size_t>{3, 8, 9, 5, 6, 7, 1, 2, 4}));
  EXPECT_EQ(plan.group_begin, (std::vector<std::size_t>{0, 3, 6}));
}

TEST(IntraGroup, SingleGroupSingleBank) {
  const Dataset ds = accd::data::uniform_points(12, 2, 3);
  const LayoutPlan plan = pack_intra_group(ds, explicit_groups(ds, std::vector<std::size_t>(12, 0), 1), 1);
  std::vector<std::size_t> identity(12);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  EXPECT_EQ(plan.point_perm, identity);
  EXPECT_EQ(restore_rows(std::vector<std::size_t>(identity), plan), identity);
}

TEST(IntraGroup, FourEqualGroupsOnTwoBanks) {
  const Dataset ds = accd::data::uniform_points(40, 2, 3);
  std::vector<std::size_t> group_of(40);
  for (std::size_t i = 0; i < 40; ++i) group_of[i] = i % 4;
  const LayoutPlan plan = pack_intra_group(ds, explicit_groups(ds, group_of, 4), 2);
  EXPECT_EQ(plan.bank_load, (std::vector<std::size_t>{20, 20}));
  EXPECT_EQ(std::count(plan.bank_of_group.begin(), plan.bank_of_group.end(), 0u), 2);
}

TEST(IntraGroup, CapacityAndArgumentErrors) {
  const Dataset ds = accd::data::uniform_points(10, 2, 3);
  std::vector<std::size_t> group_of(10, 0);
  group_of[9] = 1;
  const GroupModel gm = explicit_groups(ds, group_of, 2);
  EXPECT_THROW(pack_intra_group(ds, gm, 2, {}, 5), accd::CapacityError);
  EXPECT_THROW(pack_intra_group(ds, gm, 0), accd::RangeError);
  const std::vector<std::size_t> bad_order{0, 0};
  EXPECT_THROW(pack_intra_group(ds, gm, 1, bad_order), accd::RangeError);
  const LayoutPlan plan = pack_intra_group(ds, gm, 1);
  EXPECT_THROW(apply_layout(accd::data::uniform_points(9, 2, 1), plan), accd::SizeMismatch);
}

std::size_t optimal_max_load(const std::vector<std::size_t>& sizes, std::size_t banks) {
  std::size_t best = SIZE_MAX;
  std::vector<std::size_t> assign(sizes.size(), 0);
  for (;;) {
    std::vector<std::size_t> load(banks, 0);
    for (std::size_t g = 0; g < sizes.size(); ++g) load[assign[g]] += sizes[g];
    best = std::min(best, *std::max_element(load.begin(), load.end()));
    std::size_t i = 0;
    while (i < assign.size() && ++assign[i] == banks) assign[i++] = 0;
    if (i == assign.size()) return best;
  }
}

TEST(IntraGroup, PlanInvariantsOnRandomGroupings) {
  accd::util::Rng rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t z = 1 + accd::util::uniform_index(rng, 8);
    const std::size_t banks = 1 + accd::util::uniform_index(rng, 3);
    std::vector<std::size_t> group_of;
    for (std::size_t g = 0; g < z; ++g) {
      const auto size = 1 + accd::util::uniform_index(rng, 30);
      group_of.insert(group_of.end(), size, g);
    }
    std::shuffle(group_of.begin(), group_of.end(), rng);
    const Dataset ds = accd::data::uniform_points(group_of.size(), 2, rng());
    const GroupModel gm = explicit_groups(ds, group_of, z);
    std::vector<std::size_t> order(z);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    const LayoutPlan plan = pack_intra_group(ds, gm, banks, order);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      ASSERT_EQ(plan.inverse_perm[plan.point_perm[i]], i);
      ASSERT_EQ(plan.point_perm[plan.inverse_perm[i]], i);
    }
    std::vector<std::size_t> sizes(z);
    for (std::size_t g = 0; g < z; ++g) {
      sizes[g] = gm.members[g].size();
      std::size_t lo = SIZE_MAX, hi = 0;
      for (const auto p : gm.members[g]) {
        lo = std::min(lo, plan.inverse_perm[p]);
        hi = std::max(hi, plan.inverse_perm[p]);
      }
      ASSERT_EQ(hi - lo + 1, sizes[g]);
      ASSERT_EQ(lo, plan.group_begin[g]);
    }
    // Banks are contiguous segments, so no group straddles a bank boundary.
    for (std::size_t i = 1; i < z; ++i) {
      ASSERT_LE(plan.bank_of_group[order[i - 1]], plan.bank_of_group[order[i]]);
    }
    const std::size_t worst = *std::max_element(plan.bank_load.begin(), plan.bank_load.end());
    ASSERT_LE(worst, 2 * optimal_max_load(sizes, banks));
    const Dataset packed = apply_layout(ds, plan);
    std::vector<std::size_t> ids = packed.ids();
    std::sort(ids.begin(), ids.end());
    ASSERT_EQ(ids, ds.ids());
  }
}

TEST(Restore, TopKAndNeighborLists) {
  const Dataset ds = accd::data::uniform_points(6, 1, 2);
  const std::vector<std::size_t> group_of{1, 0, 1, 0, 2, 2};
  const LayoutPlan plan = pack_intra_group(ds, explicit_groups(ds, group_of, 3), 2);
  EXPECT_EQ(plan.point_perm, (std::vector<std::size_t>{1, 3, 0, 2, 4, 5}));
  accd::data::TopKResult packed{1, accd::data::Scope::Smallest, {}};
  for (std::size_t i = 0; i < 6; ++i) packed.rows.push_back({{100 + plan.point_perm[i], 0.5}});
  const auto restored = restore_ids(packed, plan);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(restored.rows[i][0].id, 100 + i);
  // Packed row 0 (original 1) neighbors packed 2 and 1 (originals 0 and 3).
  std::vector<std::vector<std::size_t>> lists(6);
  lists[0] = {2, 1};
  const auto back = restore_ids(lists, plan);
  EXPECT_EQ(back[1], (std::vector<std::size_t>{0, 3}));
  EXPECT_THROW(restore_ids(std::vector<std::vector<std::size_t>>(5), plan), accd::SizeMismatch);
}

}  // namespace
