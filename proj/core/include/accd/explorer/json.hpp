#pragma once

#include <string>

#include "accd/explorer/explorer.hpp"

namespace accd::explorer {

inline constexpr const char* kExplorerSchema = "accd.explore/1";

/// {"src_size", "trg_size", "d", "n_iteration", "alpha"?, "size_data_type"?}
ProblemSpec problem_from_json(const std::string& text);
/// {"n_src_grp": [...], "n_trg_grp": [...], "blk": [...], "simd": [...], "unroll": [...]}
Domains domains_from_json(const std::string& text);
/// Optional keys population, mutation, crossover, threshold, max_generations, stall_generations.
GaParams ga_from_json(const std::string& text);

std::string config_to_json(const DesignConfig& c);
std::string report_to_json(const ModelReport& r);
/// {schema, best_config, report, generations: [{best, mean, feasible_count}], evaluations}
std::string explore_to_json(const ExploreResult& r);
/// Same layout for a failed search, with the nearest miss in place of the best config.
std::string no_feasible_to_json(const NoFeasibleConfig& e);

}  // namespace accd::explorer
