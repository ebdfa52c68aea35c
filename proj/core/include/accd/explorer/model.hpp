#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace accd::explorer {

/// Explorer decision variables.
struct DesignConfig {
  std::size_t n_src_grp = 1;
  std::size_t n_trg_grp = 1;
  std::size_t blk = 64;
  std::size_t simd = 4;
  std::size_t unroll = 4;

  auto key() const noexcept { return std::tie(n_src_grp, n_trg_grp, blk, simd, unroll); }
  friend bool operator==(const DesignConfig& a, const DesignConfig& b) { return a.key() == b.key(); }
  friend bool operator<(const DesignConfig& a, const DesignConfig& b) { return a.key() < b.key(); }
  std::string to_string() const;
};

struct ProblemSpec {
  std::size_t src_size = 1;
  std::size_t trg_size = 1;
  std::size_t d = 1;
  std::size_t n_iteration = 1;
  double alpha = 1.0;            // point-density calibration for the saving-ratio model
  unsigned size_data_type = 32;  // bits per element

  void check() const;
};

struct ResourceUsage {
  double mem = 0.0;  // on-chip memory blocks
  double dsp = 0.0;
  double alm = 0.0;
  friend bool operator==(const ResourceUsage&, const ResourceUsage&) = default;
};

/// Resource_single per (blk, simd, unroll).
using ResourceKey = std::tuple<std::size_t, std::size_t, std::size_t>;
using ResourceTable = std::map<ResourceKey, ResourceUsage>;

struct PlatformSpec {
  double frequency = 200e6;  // Hz
  double bw_max = 0.0;       // bytes/s
  double mem_max = 0.0;      // memory blocks
  double cu_max = 0.0;       // DSPs
  double lu_max = 0.0;       // ALMs
  ResourceTable resource_table;

  /// Frequency must be positive, maxima non-negative.
  void check() const;
};

/// Resource table CSV with header `blk,simd,unroll,mem_blocks,dsp,alm`.
ResourceTable load_resource_table(const std::filesystem::path& path);
ResourceTable parse_resource_table(const std::string& text);

/// `key = value` lines (frequency_hz, bw_max_bytes_per_s, mem_max_blocks, cu_max, lu_max,
/// resource_table). A relative resource_table path resolves against the platform file.
PlatformSpec load_platform(const std::filesystem::path& path);

struct SavingRatio {
  double raw = 0.0;
  double clamped = 0.0;  // raw limited to [0, 1]
};

/// raw = (n_iteration / alpha) * sqrt(src * trg / (n_src_grp * n_trg_grp)).
SavingRatio model_saving_ratio(const ProblemSpec& p, const DesignConfig& c);

struct Latency {
  double filt = 0.0;
  double comp = 0.0;
  double total = 0.0;
};

/// filt = n_trg_grp * n_src_grp * src * trg * d / n_iteration;
/// comp = src * trg * ratio_save * d / (blk^2 * frequency * unroll * simd); total = filt + comp.
Latency model_latency(const ProblemSpec& p, const DesignConfig& c, double frequency,
                      double ratio_save);

/// (src + trg) * d * (size_data_type / 8) / latency_total, in bytes per second.
/// Throws DivisionGuard when latency_total is zero.
double model_bandwidth(const ProblemSpec& p, double latency_total);

/// Resource_single * ceil(src / blk) * ceil(trg / blk). Throws TableMiss.
ResourceUsage estimate_resources(const ProblemSpec& p, const DesignConfig& c,
                                 const PlatformSpec& platform);

enum class Constraint { Bandwidth, Memory, Dsp, Alm };
std::string constraint_name(Constraint c);

struct Violation {
  Constraint constraint = Constraint::Bandwidth;
  double used = 0.0;
  double limit = 0.0;
  double margin = 0.0;  // (used - limit) / limit; +inf when limit is 0
};

struct ModelReport {
  double latency_filt = 0.0;
  double latency_comp = 0.0;
  double latency_total = 0.0;
  double ratio_save_raw = 0.0;
  double ratio_save_model = 0.0;
  double bw_required = 0.0;
  ResourceUsage resources;
  bool feasible = true;
  std::vector<Violation> violated;
};

/// BW <= BW_max, Mem <= Mem_max, DSP <= CU_max, ALM <= LU_max. Fills `violated` in that
/// order and sets `feasible`.
void validate_constraints(ModelReport& report, const PlatformSpec& platform);

/// Full model evaluation of one configuration.
ModelReport evaluate(const ProblemSpec& p, const DesignConfig& c, const PlatformSpec& platform);

/// alpha that makes the modeled saving ratio equal a measured one on a pilot run.
double fit_alpha(const ProblemSpec& p, const DesignConfig& c, double measured_saving);

}  // namespace accd::explorer
