#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "accd/data/dataset.hpp"
#include "accd/data/topk.hpp"
#include "accd/gti/filter.hpp"
#include "accd/gti/groups.hpp"

namespace accd::layout {

/// Source groups sorted by (candidate target list, group ID), so that groups sharing a
/// candidate list are adjacent.
std::vector<std::size_t> reorder_inter_group(const gti::CandidateMatrix& cm);

/// Splits `order` into maximal runs of adjacent source groups with identical candidate
/// lists. Groups whose list is empty are dropped. Each run is processed as one batch.
std::vector<std::vector<std::size_t>> candidate_runs(const gti::CandidateMatrix& cm,
                                                     std::span<const std::size_t> order);

/// Packed memory order for one point set.
///
/// point_perm[packed] = original row; inverse_perm[original] = packed row. Every group
/// occupies the contiguous range [group_begin[g], group_begin[g] + size) inside a
/// single bank.
struct LayoutPlan {
  std::vector<std::size_t> group_order;
  std::vector<std::size_t> point_perm;
  std::vector<std::size_t> inverse_perm;
  std::vector<std::size_t> group_begin;
  std::vector<std::size_t> bank_of_group;
  std::vector<std::size_t> bank_load;
  std::size_t n_banks = 1;
};

inline constexpr std::size_t kDefaultBanks = 4;

/// Lays groups out back to back in `group_order` (identity when empty), members in
/// ascending order. Banks are contiguous segments of that sequence: a group goes to bank
/// floor(points_before * n_banks / n). With `bank_capacity`, throws CapacityError when a
/// group exceeds it.
LayoutPlan pack_intra_group(const data::Dataset& ds, const gti::GroupModel& gm, std::size_t n_banks,
                            std::span<const std::size_t> group_order = {},
                            std::optional<std::size_t> bank_capacity = std::nullopt);

/// Rows permuted into packed order; point IDs travel with their rows.
data::Dataset apply_layout(const data::Dataset& ds, const LayoutPlan& plan);

/// Per-row results computed in packed order, returned in original row order.
template <typename T>
std::vector<T> restore_rows(std::vector<T> packed, const LayoutPlan& plan);

/// Top-k rows back to original source order. Neighbor IDs are stable point IDs and are
/// left untouched.
data::TopKResult restore_ids(data::TopKResult packed, const LayoutPlan& plan);

/// Self-set neighbor lists (rows in packed order, entries as packed indices) back to
/// original rows and original indices, each list ascending.
std::vector<std::vector<std::size_t>> restore_ids(
    const std::vector<std::vector<std::size_t>>& packed, const LayoutPlan& plan);

}  // namespace accd::layout

#include "accd/layout/layout_impl.hpp"
