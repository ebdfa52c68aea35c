#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace accd::ddsl {

/// Source location. 1-based line and column; offset/length in bytes.
/// Spans never take part in node equality, so reprinted programs compare equal.
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::size_t line = 1;
  std::size_t col = 1;

  friend bool operator==(const Span&, const Span&) noexcept { return true; }
};

enum class DType { Int32, Float32, Float64 };

/// DDSL keyword: int, float, double.
const char* dtype_keyword(DType t) noexcept;

struct Ident {
  std::string name;
  Span span;
  friend bool operator==(const Ident&, const Ident&) = default;
};

/// Numeric literal. Integers keep their exact value; anything with a '.' or exponent is
/// a double.
struct Literal {
  std::variant<std::int64_t, double> value;
  Span span;

  bool is_integer() const noexcept { return std::holds_alternative<std::int64_t>(value); }
  double as_double() const noexcept {
    return is_integer() ? static_cast<double>(std::get<std::int64_t>(value)) : std::get<double>(value);
  }
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Size or dimension reference: a declared identifier or a non-negative integer.
struct SizeRef {
  std::variant<Ident, std::int64_t> value;
  Span span;

  bool is_ident() const noexcept { return std::holds_alternative<Ident>(value); }
  const Ident& ident() const { return std::get<Ident>(value); }
  std::int64_t integer() const { return std::get<std::int64_t>(value); }
  friend bool operator==(const SizeRef&, const SizeRef&) = default;
};

struct StringLit {
  std::string text;  // without quotes
  Span span;
  friend bool operator==(const StringLit&, const StringLit&) = default;
};

struct VarDecl {
  Ident name;
  DType dtype = DType::Int32;
  std::optional<Literal> init;
  Span span;
  friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

struct SetDecl {
  Ident name;
  DType dtype = DType::Float32;
  SizeRef size;
  SizeRef dim;
  Span span;
  friend bool operator==(const SetDecl&, const SetDecl&) = default;
};

using Decl = std::variant<VarDecl, SetDecl>;

/// AccD_Comp_Dist(src, trg, distMat, idMat, dim, metric, weights)
struct ComputeDist {
  Ident src;
  Ident trg;
  Ident dist_mat;
  Ident id_mat;
  SizeRef dim;
  StringLit metric;
  SizeRef weights;
  Span span;
  friend bool operator==(const ComputeDist&, const ComputeDist&) = default;
};

/// AccD_Dist_Select(distMat, idMat, range, scope, out)
struct DistSelect {
  Ident dist_mat;
  Ident id_mat;
  SizeRef range;
  StringLit scope;
  Ident out;
  Span span;
  friend bool operator==(const DistSelect&, const DistSelect&) = default;
};

/// AccD_Update(target, inputs..., [status])
struct Update {
  std::vector<Ident> operands;
  Span span;
  friend bool operator==(const Update&, const Update&) = default;
};

using Stmt = std::variant<ComputeDist, DistSelect, Update>;

/// `S = false;` at the head of an iteration body.
struct StatusInit {
  Ident var;
  bool value = false;
  Span span;
  friend bool operator==(const StatusInit&, const StatusInit&) = default;
};

/// AccD_Iter(count | status) { ... }
struct Iter {
  std::variant<Ident, std::int64_t> control;
  Span control_span;
  std::optional<StatusInit> status_init;
  std::vector<Stmt> body;
  Span span;
  friend bool operator==(const Iter&, const Iter&) = default;
};

using Construct = std::variant<ComputeDist, DistSelect, Update, Iter>;

struct Program {
  std::vector<Decl> decls;
  std::vector<Construct> body;
  friend bool operator==(const Program&, const Program&) = default;
};

const Span& span_of(const Decl& d) noexcept;
const Span& span_of(const Stmt& s) noexcept;
const Span& span_of(const Construct& c) noexcept;
const Ident& name_of(const Decl& d) noexcept;

}  // namespace accd::ddsl
