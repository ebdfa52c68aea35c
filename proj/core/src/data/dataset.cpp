#include "accd/data/dataset.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "accd/error.hpp"

namespace accd::data {

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> values)
    : Dataset(n, d, std::move(values), [n] {
        std::vector<std::size_t> ids(n);
        std::iota(ids.begin(), ids.end(), std::size_t{0});
        return ids;
      }()) {}

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> values,
                 std::vector<std::size_t> ids)
    : n_(n), d_(d), values_(std::move(values)), ids_(std::move(ids)) {
  if (values_.size() != n_ * d_) {
    throw SizeMismatch("dataset: expected " + std::to_string(n_ * d_) + " values, got " +
                       std::to_string(values_.size()));
  }
  if (ids_.size() != n_) {
    throw SizeMismatch("dataset: expected " + std::to_string(n_) + " ids, got " +
                       std::to_string(ids_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw FormatError("dataset: non-finite value", i / (d_ == 0 ? 1 : d_) + 1,
                        d_ == 0 ? 0 : i % d_ + 1);
    }
  }
  std::vector<bool> seen(n_, false);
  for (std::size_t id : ids_) {
    if (id >= n_ || seen[id]) {
      throw RangeError("dataset: ids must be a permutation of 0..n-1");
    }
    seen[id] = true;
  }
}

}  // namespace accd::data
