#include "accd/explorer/model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "accd/error.hpp"

namespace accd::explorer {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw FormatError(what + ": not a number: '" + text + "'", 0, 0);
  }
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string DesignConfig::to_string() const {
  std::ostringstream os;
  os << "{n_src_grp=" << n_src_grp << ", n_trg_grp=" << n_trg_grp << ", blk=" << blk
     << ", simd=" << simd << ", unroll=" << unroll << "}";
  return os.str();
}

void ProblemSpec::check() const {
  if (src_size == 0 || trg_size == 0 || d == 0 || n_iteration == 0) {
    throw RangeError("problem: src_size, trg_size, d and n_iteration must be >= 1");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw RangeError("problem: alpha must be > 0");
  if (size_data_type != 32 && size_data_type != 64) {
    throw RangeError("problem: size_data_type must be 32 or 64");
  }
}

void PlatformSpec::check() const {
  if (!(frequency > 0.0)) throw RangeError("platform: frequency must be > 0");
  for (double m : {bw_max, mem_max, cu_max, lu_max}) {
    if (!(m >= 0.0)) throw RangeError("platform: resource maxima must be >= 0");
  }
}

ResourceTable parse_resource_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  ResourceTable table;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(trim(cell));
    if (!header_seen) {
      if (line != "blk,simd,unroll,mem_blocks,dsp,alm") {
        throw FormatError("resource table: expected header blk,simd,unroll,mem_blocks,dsp,alm",
                          lineno, 1);
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 6) throw FormatError("resource table: expected 6 columns", lineno, 0);
    double v[6];
    for (std::size_t i = 0; i < 6; ++i) {
      try {
        v[i] = parse_number(cells[i], "resource table");
      } catch (const FormatError& e) {
        throw FormatError(e.what(), lineno, i + 1);
      }
      if (v[i] < 0) throw FormatError("resource table: negative value", lineno, i + 1);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (v[i] < 1 || v[i] != std::floor(v[i])) {
        throw FormatError("resource table: kernel parameters must be positive integers", lineno, i + 1);
      }
    }
    const ResourceKey key{static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1]),
                          static_cast<std::size_t>(v[2])};
    if (!table.emplace(key, ResourceUsage{v[3], v[4], v[5]}).second) {
      throw FormatError("resource table: duplicate configuration", lineno, 1);
    }
  }
  if (!header_seen) throw FormatError("resource table: empty", 1, 1);
  return table;
}

ResourceTable load_resource_table(const std::filesystem::path& path) {
  return parse_resource_table(read_file(path));
}

PlatformSpec load_platform(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  PlatformSpec spec;
  std::string line;
  std::size_t lineno = 0;
  bool have[6] = {};
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("platform: expected key = value", lineno, 1);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto num = [&] {
      try {
        return parse_number(value, "platform " + key);
      } catch (const FormatError& e) {
        throw FormatError(e.what(), lineno, eq + 2);
      }
    };
    if (key == "frequency_hz") {
      spec.frequency = num(), have[0] = true;
    } else if (key == "bw_max_bytes_per_s") {
      spec.bw_max = num(), have[1] = true;
    } else if (key == "mem_max_blocks") {
      spec.mem_max = num(), have[2] = true;
    } else if (key == "cu_max") {
      spec.cu_max = num(), have[3] = true;
    } else if (key == "lu_max") {
      spec.lu_max = num(), have[4] = true;
    } else if (key == "resource_table") {
      std::filesystem::path table = value;
      if (table.is_relative()) table = path.parent_path() / table;
      spec.resource_table = load_resource_table(table);
      have[5] = true;
    } else {
      throw FormatError("platform: unknown key '" + key + "'", lineno, 1);
    }
  }
  static const char* names[6] = {"frequency_hz", "bw_max_bytes_per_s", "mem_max_blocks",
                                 "cu_max",       "lu_max",             "resource_table"};
  for (int i = 0; i < 6; ++i) {
    if (!have[i]) throw FormatError(std::string("platform: missing key ") + names[i], 0, 0);
  }
  spec.check();
  return spec;
}

SavingRatio model_saving_ratio(const ProblemSpec& p, const DesignConfig& c) {
  const double raw = (static_cast<double>(p.n_iteration) / p.alpha) *
                     std::sqrt(static_cast<double>(p.src_size) * static_cast<double>(p.trg_size) /
                               (static_cast<double>(c.n_src_grp) * static_cast<double>(c.n_trg_grp)));
  return {raw, std::clamp(raw, 0.0, 1.0)};
}

Latency model_latency(const ProblemSpec& p, const DesignConfig& c, double frequency,
                      double ratio_save) {
  const double src = static_cast<double>(p.src_size);
  const double trg = static_cast<double>(p.trg_size);
  const double d = static_cast<double>(p.d);
  const double blk = static_cast<double>(c.blk);
  Latency l;
  l.filt = static_cast<double>(c.n_trg_grp) * static_cast<double>(c.n_src_grp) * src * trg * d /
           static_cast<double>(p.n_iteration);
  l.comp = src * trg * ratio_save * d /
           (blk * blk * frequency * static_cast<double>(c.unroll) * static_cast<double>(c.simd));
  l.total = l.filt + l.comp;
  return l;
}

double model_bandwidth(const ProblemSpec& p, double latency_total) {
  if (latency_total == 0.0) throw DivisionGuard("model_bandwidth: latency_total is zero");
  return static_cast<double>(p.src_size + p.trg_size) * static_cast<double>(p.d) *
         (static_cast<double>(p.size_data_type) / 8.0) / latency_total;
}

ResourceUsage estimate_resources(const ProblemSpec& p, const DesignConfig& c,
                                 const PlatformSpec& platform) {
  const auto it = platform.resource_table.find({c.blk, c.simd, c.unroll});
  if (it == platform.resource_table.end()) {
    throw TableMiss("resource table has no entry for blk=" + std::to_string(c.blk) +
                    " simd=" + std::to_string(c.simd) + " unroll=" + std::to_string(c.unroll));
  }
  const double tiles = static_cast<double>((p.src_size + c.blk - 1) / c.blk) *
                       static_cast<double>((p.trg_size + c.blk - 1) / c.blk);
  return {it->second.mem * tiles, it->second.dsp * tiles, it->second.alm * tiles};
}

std::string constraint_name(Constraint c) {
  switch (c) {
    case Constraint::Bandwidth: return "bandwidth";
    case Constraint::Memory: return "memory";
    case Constraint::Dsp: return "dsp";
    case Constraint::Alm: return "alm";
  }
  return "?";
}

void validate_constraints(ModelReport& report, const PlatformSpec& platform) {
  report.violated.clear();
  auto check = [&](Constraint which, double used, double limit) {
    if (used <= limit) return;
    const double margin =
        limit > 0.0 ? (used - limit) / limit : std::numeric_limits<double>::infinity();
    report.violated.push_back({which, used, limit, margin});
  };
  check(Constraint::Bandwidth, report.bw_required, platform.bw_max);
  check(Constraint::Memory, report.resources.mem, platform.mem_max);
  check(Constraint::Dsp, report.resources.dsp, platform.cu_max);
  check(Constraint::Alm, report.resources.alm, platform.lu_max);
  report.feasible = report.violated.empty();
}

ModelReport evaluate(const ProblemSpec& p, const DesignConfig& c, const PlatformSpec& platform) {
  ModelReport r;
  const SavingRatio ratio = model_saving_ratio(p, c);
  r.ratio_save_raw = ratio.raw;
  r.ratio_save_model = ratio.clamped;
  const Latency l = model_latency(p, c, platform.frequency, ratio.clamped);
  r.latency_filt = l.filt;
  r.latency_comp = l.comp;
  r.latency_total = l.total;
  r.bw_required = model_bandwidth(p, l.total);
  r.resources = estimate_resources(p, c, platform);
  validate_constraints(r, platform);
  return r;
}

double fit_alpha(const ProblemSpec& p, const DesignConfig& c, double measured_saving) {
  if (!(measured_saving > 0.0)) throw RangeError("fit_alpha: measured saving must be > 0");
  ProblemSpec unit = p;
  unit.alpha = 1.0;
  return model_saving_ratio(unit, c).raw / measured_saving;
}

}  // namespace accd::explorer
