#include "accd/data/topk.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "accd/error.hpp"

namespace accd::data {

std::vector<Neighbor> select_topk(std::span<const double> distances,
                                  std::span<const std::size_t> ids, std::size_t k, Scope scope) {
  if (distances.size() != ids.size()) {
    throw SizeMismatch("select_topk: distances and ids differ in length");
  }
  if (k == 0 || k > distances.size()) {
    throw RangeError("select_topk: k=" + std::to_string(k) + " outside [1, " +
                     std::to_string(distances.size()) + "]");
  }
  std::vector<Neighbor> row(distances.size());
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = {ids[i], distances[i]};
  auto cmp = [scope](const Neighbor& a, const Neighbor& b) { return ranks_before(a, b, scope); };
  std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end(), cmp);
  row.resize(k);
  std::sort(row.begin(), row.end(), cmp);
  return row;
}

void TopKAccumulator::offer(std::size_t id, double distance) {
  // Max-heap on rank: the front is the worst kept entry.
  auto cmp = [this](const Neighbor& a, const Neighbor& b) { return ranks_before(a, b, scope_); };
  const Neighbor candidate{id, distance};
  if (heap_.size() < k_) {
    heap_.push_back(candidate);
    std::push_heap(heap_.begin(), heap_.end(), cmp);
    return;
  }
  if (!ranks_before(candidate, heap_.front(), scope_)) return;
  std::pop_heap(heap_.begin(), heap_.end(), cmp);
  heap_.back() = candidate;
  std::push_heap(heap_.begin(), heap_.end(), cmp);
}

std::vector<Neighbor> TopKAccumulator::take_sorted() {
  auto cmp = [this](const Neighbor& a, const Neighbor& b) { return ranks_before(a, b, scope_); };
  std::sort_heap(heap_.begin(), heap_.end(), cmp);
  return std::exchange(heap_, {});
}

}  // namespace accd::data
