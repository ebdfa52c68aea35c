#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "accd/data/metric.hpp"
#include "accd/error.hpp"
#include "accd/data/topk.hpp"
#include "accd/ddsl/ast.hpp"
#include "accd/ddsl/check.hpp"

namespace accd::ddsl {

enum class PipelineKind { IterativeTwoSet, OneshotTwoSet, IterativeSelfSet };

/// "iterative_two_set", "oneshot_two_set", "iterative_self_set".
const char* pipeline_kind_name(PipelineKind k) noexcept;

struct SetRef {
  std::string name;
  DType dtype = DType::Float32;
  std::size_t size = 0;
  std::size_t dim = 0;
  friend bool operator==(const SetRef&, const SetRef&) = default;
};

struct Selection {
  enum class Kind { Count, Radius };
  Kind kind = Kind::Count;
  std::size_t k = 0;
  double radius = 0.0;
  data::Scope scope = data::Scope::Smallest;
  friend bool operator==(const Selection&, const Selection&) = default;
};

/// What the pipelines execute. Weighted metrics carry no weights yet; they are bound at
/// run time from the data named by `weight_set`.
struct ExecutionPlan {
  PipelineKind pipeline_kind = PipelineKind::OneshotTwoSet;
  SetRef source_set;
  SetRef target_set;
  data::MetricSpec metric;
  std::optional<std::string> weight_set;
  Selection select;
  std::vector<std::string> update_targets;
  std::optional<std::size_t> max_iter;      // AccD_Iter(count)
  std::optional<std::string> exit_status;   // AccD_Iter(status)
  std::string dist_mat;
  std::string id_mat;
  std::string output;
  friend bool operator==(const ExecutionPlan&, const ExecutionPlan&) = default;
};

/// Classifies the program:
///   AccD_Iter around one source/target pair that differ -> iterative_two_set
///   AccD_Iter where source and target are the same set -> iterative_self_set
///   no AccD_Iter                                         -> oneshot_two_set
/// Every program holds exactly one AccD_Comp_Dist followed by one AccD_Dist_Select over
/// its outputs, plus at most one AccD_Update. Anything else throws UnsupportedProgram.
ExecutionPlan lower(const CheckedProgram& cp);

/// Canonical JSON rendering (snake_case keys).
std::string plan_to_json(const ExecutionPlan& plan, int indent = 2);

}  // namespace accd::ddsl

namespace accd::ddsl {

/// Thrown by compile() when validation reports errors.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// parse, validate and lower in one step.
ExecutionPlan compile(std::string_view source);

}  // namespace accd::ddsl
