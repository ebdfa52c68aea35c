#include <string>

#include "common.hpp"

namespace accd::pipelines {

void RunConfig::check() const {
  kernel.check();
  if (thread_count == 0) throw RangeError("run config: thread_count must be >= 1");
  if (n_banks == 0) throw RangeError("run config: n_banks must be >= 1");
  if (max_iter == 0) throw RangeError("run config: max_iter must be >= 1");
  if ((n_src_grp && *n_src_grp == 0) || (n_trg_grp && *n_trg_grp == 0)) {
    throw RangeError("run config: group counts must be >= 1");
  }
  if (!std::isfinite(dt) || dt < 0.0) throw RangeError("run config: dt must be finite and >= 0");
}

RunResult run(const ddsl::ExecutionPlan& plan, const data::Dataset& src,
              const std::optional<data::Dataset>& trg, const RunConfig& config) {
  switch (plan.pipeline_kind) {
    case ddsl::PipelineKind::IterativeTwoSet:
      return run_kmeans(plan, src, config, trg);
    case ddsl::PipelineKind::OneshotTwoSet:
      if (!trg) throw InvalidQuery("run: the KNN-join pipeline needs a target set");
      return run_knn_join(plan, src, *trg, config);
    case ddsl::PipelineKind::IterativeSelfSet:
      if (trg) throw InvalidQuery("run: the self-set pipeline takes a single data set");
      return run_nbody(plan, src, config);
  }
  throw InvalidQuery("run: unknown pipeline kind");
}

void bind_weights(ddsl::ExecutionPlan& plan, const data::Dataset& weights) {
  if (!plan.metric.weighted) throw InvalidQuery("bind_weights: metric is unweighted");
  if (weights.size() != 1) {
    throw SizeMismatch("bind_weights: weight set must have exactly 1 row, got " + std::to_string(weights.size()));
  }
  plan.metric.weights = weights.values();
  plan.metric.check(weights.dim());
}

}  // namespace accd::pipelines

namespace accd::pipelines {

namespace {

void conform_set(ddsl::SetRef& set, const data::Dataset& data, bool allow, const char* role) {
  if (set.size == data.size() && set.dim == data.dim()) return;
  if (!allow) {
    throw DimensionMismatch(std::string(role) + " set '" + set.name + "' is declared " +
                            std::to_string(set.size) + " x " + std::to_string(set.dim) +
                            ", data is " + std::to_string(data.size()) + " x " +
                            std::to_string(data.dim()));
  }
  set.size = data.size();
  set.dim = data.dim();
}

}  // namespace

ddsl::ExecutionPlan conform_plan(ddsl::ExecutionPlan plan, const data::Dataset& src,
                                 const std::optional<data::Dataset>& trg, bool allow_dim_from_data) {
  const bool self = plan.pipeline_kind == ddsl::PipelineKind::IterativeSelfSet;
  if (self && trg) throw InvalidQuery("run: the self-set pipeline takes a single data set");
  if (!self && plan.pipeline_kind == ddsl::PipelineKind::OneshotTwoSet && !trg) {
    throw InvalidQuery("run: the KNN-join pipeline needs a target set");
  }
  conform_set(plan.source_set, src, allow_dim_from_data, "source");
  if (self) {
    plan.target_set = plan.source_set;
  } else if (trg) {
    conform_set(plan.target_set, *trg, allow_dim_from_data, "target");
  } else if (plan.target_set.dim != src.dim()) {
    if (!allow_dim_from_data) {
      throw DimensionMismatch("target set '" + plan.target_set.name + "' has d=" +
                              std::to_string(plan.target_set.dim) + ", data has d=" +
                              std::to_string(src.dim()));
    }
    plan.target_set.dim = src.dim();
  }
  if (plan.target_set.size == 0) throw RangeError("run: target set is empty");
  if (plan.select.kind == ddsl::Selection::Kind::Count &&
      plan.pipeline_kind == ddsl::PipelineKind::OneshotTwoSet && plan.select.k > plan.target_set.size) {
    throw RangeError("K = " + std::to_string(plan.select.k) + " exceeds target set size " +
                     std::to_string(plan.target_set.size));
  }
  if (plan.pipeline_kind == ddsl::PipelineKind::IterativeTwoSet && plan.target_set.size > src.size()) {
    throw RangeError("run: " + std::to_string(plan.target_set.size) + " clusters exceed " +
                     std::to_string(src.size()) + " points");
  }
  return plan;
}

}  // namespace accd::pipelines
