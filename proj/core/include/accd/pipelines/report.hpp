#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "accd/ddsl/plan.hpp"
#include "accd/pipelines/pipelines.hpp"

namespace accd::pipelines {

inline constexpr const char* kRunReportSchema = "accd.run_report/1";

/// Run report JSON: plan, configuration, per-iteration counters, measured saving and the
/// path the outputs were written to (null when not written). Wall time is included only
/// when `include_timing` is set so that reports can be compared byte for byte.
std::string run_report_json(const ddsl::ExecutionPlan& plan, const RunConfig& config,
                            const RunResult& result, const std::optional<std::string>& outputs_path,
                            bool include_timing = true);

/// assignments: point_id,cluster (final iteration)
void write_assignments_csv(std::ostream& out, const RunResult& result);
/// topk: point_id,rank,neighbor_id,distance
void write_topk_csv(std::ostream& out, const RunResult& result);
/// nbody: step,point_id,x0..x{d-1},neighbor_count
void write_nbody_csv(std::ostream& out, const RunResult& result);
/// Chooses the writer for result.kind.
void write_outputs_csv(std::ostream& out, const RunResult& result);

}  // namespace accd::pipelines
