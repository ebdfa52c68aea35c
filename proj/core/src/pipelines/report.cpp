#include "accd/pipelines/report.hpp"

#include <charconv>
#include <ostream>

#include "accd/error.hpp"
#include "json.hpp"

namespace accd::pipelines {

namespace {

using json = nlohmann::ordered_json;

std::string number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

json stats_json(const IterationStats& s) {
  return json{{"point_distances", s.point_distances},
              {"bound_computations", s.bound_computations},
              {"pruned_pairs", s.pruned_pairs()},
              {"pruned_group_pairs", s.pruned_group_pairs},
              {"pruned_point_pairs", s.pruned_point_pairs},
              {"all_inside_pairs", s.all_inside_pairs},
              {"total_pairs", s.total_pairs},
              {"source_groups_active", s.source_groups_active},
              {"candidate_runs", s.candidate_runs},
              {"tiles", s.tiles},
              {"exact_rechecks", s.exact_rechecks},
              {"modeled_cycles", s.modeled_cycles},
              {"measured_saving", s.measured_saving},
              {"status", s.status}};
}

}  // namespace

std::string run_report_json(const ddsl::ExecutionPlan& plan, const RunConfig& config,
                            const RunResult& result, const std::optional<std::string>& outputs_path,
                            bool include_timing) {
  json j;
  j["schema"] = kRunReportSchema;
  j["plan"] = json::parse(ddsl::plan_to_json(plan));
  j["config"] = json{{"blk", config.kernel.blk},
                     {"simd", config.kernel.simd},
                     {"unroll", config.kernel.unroll},
                     {"frequency_hz", config.kernel.frequency},
                     {"n_src_grp", result.src_groups},
                     {"n_trg_grp", result.trg_groups},
                     {"seed", config.seed},
                     {"layout_enabled", config.layout_enabled},
                     {"n_banks", config.n_banks},
                     {"oracle_mode", config.oracle_mode == OracleMode::Shadow ? "shadow" : "off"},
                     {"thread_count", config.thread_count}};
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  json iters = json::array();
  for (const auto& s : result.per_iteration) iters.push_back(stats_json(s));
  j["per_iteration"] = iters;
  j["totals"] = json{{"grouping_distances", result.grouping_distances},
                     {"point_distances", result.point_distances},
                     {"bound_computations", result.bound_computations},
                     {"pruned_pairs", result.pruned_pairs},
                     {"exact_rechecks", result.exact_rechecks},
                     {"tiles", result.kernel.tiles_executed},
                     {"mac_ops", result.kernel.mac_ops},
                     {"bytes_streamed", result.kernel.bytes_streamed},
                     {"modeled_cycles", result.kernel.modeled_cycles}};
  j["measured_saving"] = result.measured_saving;
  if (result.layout) {
    const auto& lp = *result.layout;
    j["layout"] = json{{"n_banks", lp.n_banks},
                       {"group_order", lp.group_order},
                       {"group_begin", lp.group_begin},
                       {"bank_of_group", lp.bank_of_group},
                       {"bank_load", lp.bank_load},
                       {"point_perm", lp.point_perm}};
  } else {
    j["layout"] = nullptr;
  }
  j["oracle_checked"] = result.oracle_checked;
  j["outputs_path"] = outputs_path ? json(*outputs_path) : json();
  if (include_timing) j["wall_seconds"] = result.wall_seconds;
  return j.dump(2);
}

void write_assignments_csv(std::ostream& out, const RunResult& result) {
  out << "point_id,cluster\n";
  if (result.assignments.empty()) return;
  const auto& last = result.assignments.back();
  for (std::size_t p = 0; p < last.size(); ++p) out << p << ',' << last[p] << '\n';
}

void write_topk_csv(std::ostream& out, const RunResult& result) {
  out << "point_id,rank,neighbor_id,distance\n";
  if (!result.topk) return;
  for (std::size_t p = 0; p < result.topk->rows.size(); ++p) {
    const auto& row = result.topk->rows[p];
    for (std::size_t r = 0; r < row.size(); ++r) {
      out << p << ',' << r + 1 << ',' << row[r].id << ',' << number(row[r].distance) << '\n';
    }
  }
}

void write_nbody_csv(std::ostream& out, const RunResult& result) {
  const std::size_t d = result.trajectory.empty() ? 0 : result.trajectory.front().dim();
  out << "step,point_id";
  for (std::size_t c = 0; c < d; ++c) out << ",x" << c;
  out << ",neighbor_count\n";
  for (std::size_t s = 0; s < result.trajectory.size(); ++s) {
    const auto& ds = result.trajectory[s];
    for (std::size_t i = 0; i < ds.size(); ++i) {
      out << s + 1 << ',' << ds.id(i);
      for (double v : ds.row(i)) out << ',' << number(v);
      out << ',' << result.neighbors[s][i].size() << '\n';
    }
  }
}

void write_outputs_csv(std::ostream& out, const RunResult& result) {
  switch (result.kind) {
    case ddsl::PipelineKind::IterativeTwoSet: return write_assignments_csv(out, result);
    case ddsl::PipelineKind::OneshotTwoSet: return write_topk_csv(out, result);
    case ddsl::PipelineKind::IterativeSelfSet: return write_nbody_csv(out, result);
  }
}

}  // namespace accd::pipelines
