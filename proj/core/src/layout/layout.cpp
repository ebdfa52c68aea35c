#include "accd/layout/layout.hpp"

#include <algorithm>
#include <numeric>

#include "accd/error.hpp"

namespace accd::layout {

std::vector<std::size_t> reorder_inter_group(const gti::CandidateMatrix& cm) {
  std::vector<std::size_t> order(cm.source_groups());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cm.targets[a] != cm.targets[b]) return cm.targets[a] < cm.targets[b];
    return a < b;
  });
  return order;
}

std::vector<std::vector<std::size_t>> candidate_runs(const gti::CandidateMatrix& cm,
                                                     std::span<const std::size_t> order) {
  std::vector<std::vector<std::size_t>> runs;
  for (std::size_t g : order) {
    if (cm.targets[g].empty()) continue;
    if (!runs.empty() && cm.targets[runs.back().front()] == cm.targets[g]) {
      runs.back().push_back(g);
    } else {
      runs.push_back({g});
    }
  }
  return runs;
}

LayoutPlan pack_intra_group(const data::Dataset& ds, const gti::GroupModel& gm, std::size_t n_banks,
                            std::span<const std::size_t> group_order,
                            std::optional<std::size_t> bank_capacity) {
  if (n_banks == 0) throw RangeError("pack_intra_group: n_banks must be >= 1");
  if (gm.points() != ds.size()) throw SizeMismatch("pack_intra_group: grouping covers another dataset");
  const std::size_t z = gm.size();
  LayoutPlan plan;
  plan.n_banks = n_banks;
  if (group_order.empty()) {
    plan.group_order.resize(z);
    std::iota(plan.group_order.begin(), plan.group_order.end(), std::size_t{0});
  } else {
    plan.group_order.assign(group_order.begin(), group_order.end());
    std::vector<std::size_t> check = plan.group_order;
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < check.size(); ++i) {
      if (check[i] != i || check.size() != z) {
        throw RangeError("pack_intra_group: group_order is not a permutation of the groups");
      }
    }
  }
  const std::size_t n = ds.size();
  plan.group_begin.assign(z, 0);
  plan.bank_of_group.assign(z, 0);
  plan.bank_load.assign(n_banks, 0);
  plan.point_perm.reserve(n);
  for (std::size_t g : plan.group_order) {
    const auto& members = gm.members[g];
    if (bank_capacity && members.size() > *bank_capacity) {
      throw CapacityError("pack_intra_group: group " + std::to_string(g) + " has " +
                          std::to_string(members.size()) + " points, bank capacity is " +
                          std::to_string(*bank_capacity));
    }
    const std::size_t before = plan.point_perm.size();
    const std::size_t bank = n == 0 ? 0 : std::min(n_banks - 1, before * n_banks / n);
    plan.group_begin[g] = before;
    plan.bank_of_group[g] = bank;
    plan.bank_load[bank] += members.size();
    plan.point_perm.insert(plan.point_perm.end(), members.begin(), members.end());
  }
  if (bank_capacity) {
    for (std::size_t b = 0; b < n_banks; ++b) {
      if (plan.bank_load[b] > *bank_capacity) {
        throw CapacityError("pack_intra_group: bank " + std::to_string(b) + " overflows its capacity");
      }
    }
  }
  plan.inverse_perm.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) plan.inverse_perm[plan.point_perm[i]] = i;
  return plan;
}

data::Dataset apply_layout(const data::Dataset& ds, const LayoutPlan& plan) {
  if (plan.point_perm.size() != ds.size()) {
    throw SizeMismatch("apply_layout: plan covers " + std::to_string(plan.point_perm.size()) +
                       " points, dataset has " + std::to_string(ds.size()));
  }
  const std::size_t d = ds.dim();
  std::vector<double> values(ds.size() * d);
  std::vector<std::size_t> ids(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto r = ds.row(plan.point_perm[i]);
    std::copy(r.begin(), r.end(), values.begin() + static_cast<std::ptrdiff_t>(i * d));
    ids[i] = ds.id(plan.point_perm[i]);
  }
  return data::Dataset(ds.size(), d, std::move(values), std::move(ids));
}

data::TopKResult restore_ids(data::TopKResult packed, const LayoutPlan& plan) {
  packed.rows = restore_rows(std::move(packed.rows), plan);
  return packed;
}

std::vector<std::vector<std::size_t>> restore_ids(
    const std::vector<std::vector<std::size_t>>& packed, const LayoutPlan& plan) {
  std::vector<std::vector<std::size_t>> out(packed.size());
  if (packed.size() != plan.point_perm.size()) throw SizeMismatch("restore_ids: row count");
  for (std::size_t i = 0; i < packed.size(); ++i) {
    auto& row = out[plan.point_perm[i]];
    row.reserve(packed[i].size());
    for (std::size_t j : packed[i]) {
      if (j >= plan.point_perm.size()) throw SizeMismatch("restore_ids: index outside plan");
      row.push_back(plan.point_perm[j]);
    }
    std::sort(row.begin(), row.end());
  }
  return out;
}

}  // namespace accd::layout
