#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace accd::data {

/// Read-only row-major view over an n x d block of doubles.
class MatrixView {
 public:
  MatrixView() = default;
  MatrixView(std::span<const double> values, std::size_t rows, std::size_t cols)
      : values_(values), rows_(rows), cols_(cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return values_.subspan(i * cols_, cols_);
  }

 private:
  std::span<const double> values_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
};

/// An n x d point matrix with stable point IDs. Values are always float64 and finite.
class Dataset {
 public:
  Dataset() = default;
  /// IDs default to 0..n-1.
  Dataset(std::size_t n, std::size_t d, std::vector<double> values);
  Dataset(std::size_t n, std::size_t d, std::vector<double> values, std::vector<std::size_t> ids);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  bool empty() const noexcept { return n_ == 0; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * d_, d_};
  }
  std::size_t id(std::size_t i) const noexcept { return ids_[i]; }
  const std::vector<std::size_t>& ids() const noexcept { return ids_; }
  const std::vector<double>& values() const noexcept { return values_; }
  MatrixView view() const noexcept { return {values_, n_, d_}; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> values_;
  std::vector<std::size_t> ids_;
};

}  // namespace accd::data
