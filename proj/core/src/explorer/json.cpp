#include "accd/explorer/json.hpp"

#include <cmath>

#include "json.hpp"

namespace accd::explorer {

namespace {

using json = nlohmann::ordered_json;

json parse_object(const std::string& text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string(what) + ": " + e.what(), 0, 0);
  }
  if (!j.is_object()) throw FormatError(std::string(what) + ": expected a JSON object", 0, 0);
  return j;
}

template <typename T>
T get(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw FormatError(std::string(what) + ": missing key '" + key + "'", 0, 0);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string(what) + ": key '" + key + "' has the wrong type", 0, 0);
  }
}

std::size_t get_count(const json& j, const char* key, const char* what) {
  const auto& v = j.contains(key) ? j.at(key) : json();
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw FormatError(std::string(what) + ": key '" + key + "' must be a non-negative integer", 0, 0);
  }
  return v.get<std::size_t>();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

json config_json(const DesignConfig& c) {
  return json{{"n_src_grp", c.n_src_grp}, {"n_trg_grp", c.n_trg_grp}, {"blk", c.blk},
              {"simd", c.simd},           {"unroll", c.unroll}};
}

json report_json(const ModelReport& r) {
  json violated = json::array();
  for (const auto& v : r.violated) {
    violated.push_back(json{{"constraint", constraint_name(v.constraint)},
                            {"used", v.used},
                            {"limit", v.limit},
                            {"margin", finite_or_null(v.margin)}});
  }
  return json{{"latency_filt", r.latency_filt},
              {"latency_comp", r.latency_comp},
              {"latency_total", r.latency_total},
              {"ratio_save_raw", r.ratio_save_raw},
              {"ratio_save_model", r.ratio_save_model},
              {"bw_required", r.bw_required},
              {"resources", json{{"mem", r.resources.mem}, {"dsp", r.resources.dsp}, {"alm", r.resources.alm}}},
              {"feasible", r.feasible},
              {"violated", violated}};
}

json history_json(const std::vector<GenerationStats>& history) {
  json out = json::array();
  for (const auto& g : history) {
    out.push_back(json{{"best", g.best ? json(*g.best) : json()},
                       {"mean", g.mean ? json(*g.mean) : json()},
                       {"feasible_count", g.feasible_count}});
  }
  return out;
}

}  // namespace

ProblemSpec problem_from_json(const std::string& text) {
  const json j = parse_object(text, "problem");
  ProblemSpec p;
  p.src_size = get_count(j, "src_size", "problem");
  p.trg_size = get_count(j, "trg_size", "problem");
  p.d = get_count(j, "d", "problem");
  p.n_iteration = get_count(j, "n_iteration", "problem");
  if (j.contains("alpha")) p.alpha = get<double>(j, "alpha", "problem");
  if (j.contains("size_data_type")) p.size_data_type = static_cast<unsigned>(get_count(j, "size_data_type", "problem"));
  p.check();
  return p;
}

Domains domains_from_json(const std::string& text) {
  const json j = parse_object(text, "domains");
  Domains d;
  d.n_src_grp = get<std::vector<std::size_t>>(j, "n_src_grp", "domains");
  d.n_trg_grp = get<std::vector<std::size_t>>(j, "n_trg_grp", "domains");
  d.blk = get<std::vector<std::size_t>>(j, "blk", "domains");
  d.simd = get<std::vector<std::size_t>>(j, "simd", "domains");
  d.unroll = get<std::vector<std::size_t>>(j, "unroll", "domains");
  d.check();
  return d;
}

GaParams ga_from_json(const std::string& text) {
  const json j = parse_object(text, "ga");
  GaParams g;
  if (j.contains("population")) g.population = get_count(j, "population", "ga");
  if (j.contains("mutation")) g.mutation = get<double>(j, "mutation", "ga");
  if (j.contains("crossover")) g.crossover = get<double>(j, "crossover", "ga");
  if (j.contains("threshold")) g.threshold = get<double>(j, "threshold", "ga");
  if (j.contains("max_generations")) g.max_generations = get_count(j, "max_generations", "ga");
  if (j.contains("stall_generations")) g.stall_generations = get_count(j, "stall_generations", "ga");
  g.check();
  return g;
}

std::string config_to_json(const DesignConfig& c) { return config_json(c).dump(); }

std::string report_to_json(const ModelReport& r) { return report_json(r).dump(); }

std::string explore_to_json(const ExploreResult& r) {
  json j;
  j["schema"] = kExplorerSchema;
  j["best_config"] = config_json(r.best);
  j["report"] = report_json(r.report);
  j["generations"] = history_json(r.history);
  j["evaluations"] = r.evaluations;
  return j.dump(2);
}

std::string no_feasible_to_json(const NoFeasibleConfig& e) {
  json j;
  j["schema"] = kExplorerSchema;
  j["error"] = "no_feasible_config";
  j["nearest_miss"] = config_json(e.nearest());
  j["report"] = report_json(e.report());
  j["generations"] = history_json(e.history());
  return j.dump(2);
}

}  // namespace accd::explorer
