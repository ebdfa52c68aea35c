#include "accd/ddsl/ast.hpp"

namespace accd::ddsl {

const char* dtype_keyword(DType t) noexcept {
  switch (t) {
    case DType::Int32: return "int";
    case DType::Float32: return "float";
    case DType::Float64: return "double";
  }
  return "?";
}

const Span& span_of(const Decl& d) noexcept {
  return std::visit([](const auto& x) -> const Span& { return x.span; }, d);
}

const Span& span_of(const Stmt& s) noexcept {
  return std::visit([](const auto& x) -> const Span& { return x.span; }, s);
}

const Span& span_of(const Construct& c) noexcept {
  return std::visit([](const auto& x) -> const Span& { return x.span; }, c);
}

const Ident& name_of(const Decl& d) noexcept {
  return std::visit([](const auto& x) -> const Ident& { return x.name; }, d);
}

}  // namespace accd::ddsl
