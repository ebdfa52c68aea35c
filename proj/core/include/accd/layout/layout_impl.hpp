#pragma once

#include <string>
#include <utility>

#include "accd/error.hpp"

namespace accd::layout {

template <typename T>
std::vector<T> restore_rows(std::vector<T> packed, const LayoutPlan& plan) {
  if (packed.size() != plan.point_perm.size()) {
    throw SizeMismatch("restore_rows: " + std::to_string(packed.size()) + " rows, plan covers " +
                       std::to_string(plan.point_perm.size()));
  }
  std::vector<T> out(packed.size());
  for (std::size_t i = 0; i < packed.size(); ++i) out[plan.point_perm[i]] = std::move(packed[i]);
  return out;
}

}  // namespace accd::layout
