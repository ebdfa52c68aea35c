#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "accd/ddsl/ast.hpp"
#include "accd/error.hpp"

namespace accd::ddsl {

/// Malformed DDSL. `expected` lists the token kinds that would have been accepted.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t col,
              std::vector<std::string> expected);
  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t col() const noexcept { return col_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t col_;
  std::vector<std::string> expected_;
};

/// Parses a whole program or throws SyntaxError.
///
/// Beyond the core grammar: a construct's trailing ';' may be omitted before '}', and an
/// iteration body may open with a status reset `ident = true|false;`. Nested AccD_Iter is
/// rejected.
Program parse(std::string_view text);

/// Canonical source: one declaration per line, iteration bodies indented four spaces
/// with braces on their own lines, no comments.
std::string pretty_print(const Program& p);

}  // namespace accd::ddsl
