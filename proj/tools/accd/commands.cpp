#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "accd/data/csv.hpp"
#include "accd/ddsl/check.hpp"
#include "accd/ddsl/parser.hpp"
#include "accd/ddsl/plan.hpp"
#include "accd/error.hpp"
#include "accd/explorer/json.hpp"
#include "accd/pipelines/pipelines.hpp"
#include "accd/pipelines/report.hpp"
#include "json.hpp"

namespace accd::cli {

namespace {

using json = nlohmann::json;

void print_syntax_error(const ddsl::SyntaxError& e, const std::string& file) {
  std::cerr << file << ':' << e.line() << ':' << e.col() << ": error: " << e.message() << '\n';
}

/// Parses, validates and lowers `file`. Prints diagnostics and returns nullopt on failure.
std::optional<ddsl::ExecutionPlan> compile_file(const std::string& file) {
  const std::string text = read_text(file);
  ddsl::Program program;
  try {
    program = ddsl::parse(text);
  } catch (const ddsl::SyntaxError& e) {
    print_syntax_error(e, file);
    return std::nullopt;
  }
  const ddsl::CheckResult checked = ddsl::validate(program);
  for (const auto& d : checked.diagnostics) std::cerr << ddsl::format_diagnostic(d, file) << '\n';
  if (!checked.ok()) return std::nullopt;
  try {
    return ddsl::lower(*checked.program);
  } catch (const UnsupportedProgram& e) {
    std::cerr << file << ": error: " << e.what() << '\n';
    return std::nullopt;
  }
}

data::StorageType storage_of(ddsl::DType t) {
  return t == ddsl::DType::Float32 ? data::StorageType::Float32 : data::StorageType::Float64;
}

void apply_design(pipelines::RunConfig& cfg, const std::string& arg) {
  json j;
  try {
    j = json::parse(json_argument(arg));
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("design: ") + e.what(), 0, 0);
  }
  if (j.contains("best_config")) j = j.at("best_config");
  if (!j.is_object()) throw FormatError("design: expected a JSON object", 0, 0);
  auto field = [&](const char* key) -> std::optional<std::size_t> {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number_unsigned()) {
      throw FormatError(std::string("design: '") + key + "' must be a positive integer", 0, 0);
    }
    return j.at(key).get<std::size_t>();
  };
  if (auto v = field("n_src_grp")) cfg.n_src_grp = v;
  if (auto v = field("n_trg_grp")) cfg.n_trg_grp = v;
  if (auto v = field("blk")) cfg.kernel.blk = *v;
  if (auto v = field("simd")) cfg.kernel.simd = *v;
  if (auto v = field("unroll")) cfg.kernel.unroll = *v;
}

std::string summary(const pipelines::RunResult& r) {
  std::ostringstream s;
  s << ddsl::pipeline_kind_name(r.kind) << ": " << r.iterations
    << (r.iterations == 1 ? " iteration" : " iterations") << ", point distances " << r.point_distances
    << ", bound computations " << r.bound_computations << ", pruned pairs " << r.pruned_pairs
    << ", measured saving " << r.measured_saving;
  if (r.oracle_checked) s << ", oracle match";
  return s.str();
}

}  // namespace

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string json_argument(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return arg;
  return read_text(arg);
}

int cmd_compile(const CompileOptions& o) {
  if (o.emit == "ast") {
    const std::string text = read_text(o.file);
    try {
      std::cout << ddsl::pretty_print(ddsl::parse(text));
    } catch (const ddsl::SyntaxError& e) {
      print_syntax_error(e, o.file);
      return kDiagnostics;
    }
    return kOk;
  }
  const auto plan = compile_file(o.file);
  if (!plan) return kDiagnostics;
  std::cout << ddsl::plan_to_json(*plan) << '\n';
  return kOk;
}

int cmd_run(const RunOptions& o) {
  auto plan = compile_file(o.file);
  if (!plan) return kDiagnostics;

  const data::Dataset src = data::load_csv(o.src, storage_of(plan->source_set.dtype));
  std::optional<data::Dataset> trg;
  if (o.trg) trg = data::load_csv(*o.trg, storage_of(plan->target_set.dtype));
  try {
    *plan = pipelines::conform_plan(std::move(*plan), src, trg, o.allow_dim_from_data);
  } catch (const InvalidQuery& e) {
    std::cerr << o.file << ": error: " << e.what() << '\n';
    return kDiagnostics;
  } catch (const RangeError& e) {
    std::cerr << o.file << ": error: " << e.what() << '\n';
    return kDiagnostics;
  }
  if (plan->metric.weighted) {
    if (!o.weights) {
      std::cerr << o.file << ": error: weighted metric needs --weights\n";
      return kDiagnostics;
    }
    pipelines::bind_weights(*plan, data::load_csv(*o.weights));
  } else if (o.weights) {
    std::cerr << o.file << ": error: --weights given for an unweighted metric\n";
    return kDiagnostics;
  }

  pipelines::RunConfig cfg;
  if (o.design) apply_design(cfg, *o.design);
  if (o.n_src_grp) cfg.n_src_grp = o.n_src_grp;
  if (o.n_trg_grp) cfg.n_trg_grp = o.n_trg_grp;
  if (o.blk) cfg.kernel.blk = *o.blk;
  if (o.simd) cfg.kernel.simd = *o.simd;
  if (o.unroll) cfg.kernel.unroll = *o.unroll;
  cfg.seed = o.seed;
  cfg.layout_enabled = !o.no_layout;
  cfg.n_banks = o.banks;
  cfg.oracle_mode = o.oracle == "shadow" ? pipelines::OracleMode::Shadow : pipelines::OracleMode::Off;
  cfg.thread_count = o.threads;
  if (o.max_iter) cfg.max_iter = *o.max_iter;
  if (o.dt) cfg.dt = *o.dt;

  const pipelines::RunResult result = pipelines::run(*plan, src, trg, cfg);

  std::optional<std::string> outputs = o.outputs;
  if (!outputs && o.report) {
    std::filesystem::path p(*o.report);
    outputs = p.replace_extension(".csv").string();
    if (*outputs == *o.report) outputs = *o.report + ".outputs.csv";
  }
  if (outputs) {
    std::ofstream out(*outputs);
    if (!out) throw IoError("cannot write '" + *outputs + "'");
    pipelines::write_outputs_csv(out, result);
  }
  if (o.report) {
    std::ofstream out(*o.report);
    if (!out) throw IoError("cannot write '" + *o.report + "'");
    out << pipelines::run_report_json(*plan, cfg, result, outputs) << '\n';
  }
  std::cout << summary(result) << '\n';
  return kOk;
}

int cmd_explore(const ExploreOptions& o) {
  const explorer::ProblemSpec problem = explorer::problem_from_json(json_argument(o.problem));
  const explorer::Domains domains = explorer::domains_from_json(json_argument(o.domains));
  const explorer::GaParams ga = o.ga ? explorer::ga_from_json(json_argument(*o.ga)) : explorer::GaParams{};
  const explorer::PlatformSpec platform = explorer::load_platform(o.platform);
  try {
    const auto result = explorer::explore(problem, platform, domains, ga, o.seed);
    std::cout << explorer::explore_to_json(result) << '\n';
    return kOk;
  } catch (const explorer::NoFeasibleConfig& e) {
    std::cout << explorer::no_feasible_to_json(e) << '\n';
    std::cerr << "accd explore: " << e.what() << '\n';
    return kDiagnostics;
  }
}

}  // namespace accd::cli
