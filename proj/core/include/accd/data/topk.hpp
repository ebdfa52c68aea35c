#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace accd::data {

enum class Scope { Smallest, Largest };

struct Neighbor {
  std::size_t id = 0;
  double distance = 0.0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Total order used everywhere for ranking: (distance, id) ascending for Smallest,
/// distance descending then id ascending for Largest.
inline bool ranks_before(const Neighbor& a, const Neighbor& b, Scope scope) noexcept {
  if (a.distance != b.distance) {
    return scope == Scope::Smallest ? a.distance < b.distance : a.distance > b.distance;
  }
  return a.id < b.id;
}

/// Per source point, its k selected neighbors in rank order.
struct TopKResult {
  std::size_t k = 0;
  Scope scope = Scope::Smallest;
  std::vector<std::vector<Neighbor>> rows;
  friend bool operator==(const TopKResult&, const TopKResult&) = default;
};

/// Partial selection of the k best entries of one row. Throws RangeError if k == 0 or
/// k > distances.size(), SizeMismatch if ids and distances differ in length.
std::vector<Neighbor> select_topk(std::span<const double> distances,
                                  std::span<const std::size_t> ids, std::size_t k, Scope scope);

/// Bounded heap that keeps the k best neighbors seen so far.
class TopKAccumulator {
 public:
  TopKAccumulator(std::size_t k, Scope scope) : k_(k), scope_(scope) { heap_.reserve(k + 1); }

  void offer(std::size_t id, double distance);
  bool full() const noexcept { return heap_.size() >= k_; }
  /// Current k-th best value (worst kept); only meaningful when full().
  double threshold() const noexcept { return heap_.front().distance; }
  /// Sorted in rank order; leaves the accumulator empty.
  std::vector<Neighbor> take_sorted();

 private:
  std::size_t k_;
  Scope scope_;
  std::vector<Neighbor> heap_;
};

}  // namespace accd::data
