#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace accd {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed tabular input. `row` and `col` are 1-based; 0 means "not applicable".
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t row, std::size_t col)
      : Error(what), row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class InvalidQuery : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class TableMiss : public Error {
 public:
  using Error::Error;
};

class DivisionGuard : public Error {
 public:
  using Error::Error;
};

class UnsupportedProgram : public Error {
 public:
  using Error::Error;
};

/// Raised in shadow-oracle mode when the optimized pipeline disagrees with brute force.
class OracleMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace accd
