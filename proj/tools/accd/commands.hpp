#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace accd::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDiagnostics = 1;
inline constexpr int kRuntime = 2;

struct CompileOptions {
  std::string file;
  std::string emit = "plan";
};

struct RunOptions {
  std::string file;
  std::string src;
  std::optional<std::string> trg;
  std::optional<std::string> weights;
  std::optional<std::string> design;
  std::optional<std::size_t> n_src_grp;
  std::optional<std::size_t> n_trg_grp;
  std::optional<std::size_t> blk;
  std::optional<std::size_t> simd;
  std::optional<std::size_t> unroll;
  std::uint64_t seed = 0;
  bool no_layout = false;
  std::size_t banks = 4;
  std::string oracle = "off";
  std::optional<std::string> report;
  std::optional<std::string> outputs;
  bool allow_dim_from_data = false;
  std::size_t threads = 1;
  std::optional<std::size_t> max_iter;
  std::optional<double> dt;
};

struct ExploreOptions {
  std::string problem;
  std::string platform;
  std::string domains;
  std::optional<std::string> ga;
  std::uint64_t seed = 0;
};

struct BenchOptions {
  std::string suite;
  double scale = 0.1;
  std::uint64_t seed = 0;
  std::optional<std::string> json;
  std::size_t threads = 1;
};

int cmd_compile(const CompileOptions& o);
int cmd_run(const RunOptions& o);
int cmd_explore(const ExploreOptions& o);
int cmd_bench(const BenchOptions& o);

/// Reads a whole file or throws IoError.
std::string read_text(const std::string& path);
/// Text that starts with '{' is inline JSON; anything else names a file holding it.
std::string json_argument(const std::string& arg);

}  // namespace accd::cli
