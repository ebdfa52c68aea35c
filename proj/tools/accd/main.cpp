#include <iostream>

#include "CLI11.hpp"
#include "accd/error.hpp"
#include "accd/explorer/explorer.hpp"
#include "commands.hpp"

using namespace accd::cli;

int main(int argc, char** argv) {
  CLI::App app{"accd: distance-computation compiler, runner and design explorer"};
  app.require_subcommand(1);

  CompileOptions compile;
  auto* c = app.add_subcommand("compile", "Parse, check and lower a DDSL program");
  c->add_option("file", compile.file, "DDSL source (.ddsl)")->required();
  c->add_option("--emit", compile.emit, "ast or plan")->check(CLI::IsMember({"ast", "plan"}));

  RunOptions run;
  auto* r = app.add_subcommand("run", "Execute a DDSL program on CSV data");
  r->add_option("file", run.file, "DDSL source (.ddsl)")->required();
  r->add_option("--src", run.src, "source (or particle) CSV")->required();
  r->add_option("--trg", run.trg, "target CSV; initial centroids for k-means programs");
  r->add_option("--weights", run.weights, "1 x d CSV of metric weights");
  r->add_option("--design", run.design, "design config JSON (file or inline); accepts explorer output");
  r->add_option("--n-src-grp", run.n_src_grp)->check(CLI::PositiveNumber);
  r->add_option("--n-trg-grp", run.n_trg_grp)->check(CLI::PositiveNumber);
  r->add_option("--blk", run.blk)->check(CLI::PositiveNumber);
  r->add_option("--simd", run.simd)->check(CLI::PositiveNumber);
  r->add_option("--unroll", run.unroll)->check(CLI::PositiveNumber);
  r->add_option("--seed", run.seed);
  r->add_flag("--no-layout", run.no_layout, "disable the data layout pass");
  r->add_option("--banks", run.banks, "memory banks for intra-group packing")->check(CLI::PositiveNumber);
  r->add_option("--oracle", run.oracle, "shadow or off")->check(CLI::IsMember({"shadow", "off"}));
  r->add_option("--report", run.report, "run report JSON path");
  r->add_option("--outputs", run.outputs, "outputs CSV path (default: next to the report)");
  r->add_flag("--allow-dim-from-data", run.allow_dim_from_data, "take set sizes from the data");
  r->add_option("--threads", run.threads, "worker threads")->envname("ACCD_THREADS")->check(CLI::PositiveNumber);
  r->add_option("--max-iter", run.max_iter, "cap for status-driven loops")->check(CLI::PositiveNumber);
  r->add_option("--dt", run.dt, "N-body time step")->check(CLI::NonNegativeNumber);

  ExploreOptions explore;
  auto* e = app.add_subcommand("explore", "Search the design space for the fastest feasible config");
  e->add_option("--problem", explore.problem, "problem JSON (file or inline)")->required();
  e->add_option("--platform", explore.platform, "platform spec file")->required();
  e->add_option("--domains", explore.domains, "domains JSON (file or inline)")->required();
  e->add_option("--ga", explore.ga, "GA parameters JSON (file or inline)");
  e->add_option("--seed", explore.seed);

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Synthetic pipeline vs. naive oracle comparison");
  b->add_option("--suite", bench.suite)->required()->check(CLI::IsMember({"kmeans", "knn", "nbody"}));
  b->add_option("--scale", bench.scale, "data size relative to the reference workload");
  b->add_option("--seed", bench.seed);
  b->add_option("--json", bench.json, "write the result JSON here");
  b->add_option("--threads", bench.threads)->envname("ACCD_THREADS")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kDiagnostics;
  }

  try {
    if (c->parsed()) return cmd_compile(compile);
    if (r->parsed()) return cmd_run(run);
    if (e->parsed()) return cmd_explore(explore);
    return cmd_bench(bench);
  } catch (const accd::OracleMismatch& ex) {
    std::cerr << "accd: oracle mismatch: " << ex.what() << '\n';
  } catch (const accd::Error& ex) {
    std::cerr << "accd: error: " << ex.what() << '\n';
  } catch (const std::exception& ex) {
    std::cerr << "accd: internal error: " << ex.what() << '\n';
  }
  return kRuntime;
}
