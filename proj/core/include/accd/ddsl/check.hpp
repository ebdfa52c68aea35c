#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "accd/ddsl/ast.hpp"

namespace accd::ddsl {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  Span span;
  friend bool operator==(const Diagnostic& a, const Diagnostic& b) {
    return a.severity == b.severity && a.message == b.message && a.span.offset == b.span.offset &&
           a.span.length == b.span.length && a.span.line == b.span.line && a.span.col == b.span.col;
  }
};

/// `file:line:col: severity: message`
std::string format_diagnostic(const Diagnostic& d, std::string_view file);

struct VarInfo {
  DType dtype = DType::Int32;
  std::optional<Literal> value;
};

struct SetInfo {
  DType dtype = DType::Float32;
  std::int64_t size = 0;
  std::int64_t dim = 0;
};

/// A program whose identifiers, shapes and metric strings have all been checked.
struct CheckedProgram {
  Program program;
  std::map<std::string, VarInfo> vars;
  std::map<std::string, SetInfo> sets;  // only sets whose shape resolved
  std::set<std::string> status_vars;    // implicitly declared by AccD_Update / AccD_Iter
};

struct CheckResult {
  std::optional<CheckedProgram> program;  // present iff there are no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return program.has_value(); }
};

/// Resolves identifiers and checks shapes. Each undefined identifier is reported once,
/// at its first use. The last operand of AccD_Update, when not declared, names a status
/// flag; AccD_Iter may test such a flag or take an iteration count.
CheckResult validate(const Program& p);

}  // namespace accd::ddsl
