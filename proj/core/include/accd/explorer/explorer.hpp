#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "accd/error.hpp"
#include "accd/explorer/model.hpp"

namespace accd::explorer {

/// Finite value set per decision variable.
struct Domains {
  std::vector<std::size_t> n_src_grp;
  std::vector<std::size_t> n_trg_grp;
  std::vector<std::size_t> blk;
  std::vector<std::size_t> simd;
  std::vector<std::size_t> unroll;

  std::uint64_t size() const noexcept;
  /// Non-empty, positive, no duplicates.
  void check() const;
  /// Every design point, in lexicographic domain order.
  std::vector<DesignConfig> enumerate() const;
};

struct GaParams {
  std::size_t population = 32;
  double mutation = 0.15;   // per gene
  double crossover = 0.9;   // per offspring
  double threshold = 1e-3;  // relative best-latency change that counts as converged
  std::size_t max_generations = 100;
  std::size_t stall_generations = 5;  // consecutive converged generations before stopping

  void check() const;
};

struct GenerationStats {
  std::optional<double> best;  // best feasible latency this generation
  std::optional<double> mean;  // over feasible individuals
  std::size_t feasible_count = 0;
};

struct ExploreResult {
  DesignConfig best;
  ModelReport report;
  std::vector<GenerationStats> history;
  std::uint64_t evaluations = 0;  // distinct configurations modeled
};

/// No feasible configuration was found. Carries the evaluated configuration with the
/// smallest total relative constraint excess.
class NoFeasibleConfig : public Error {
 public:
  NoFeasibleConfig(const std::string& what, DesignConfig nearest, ModelReport report,
                   std::vector<GenerationStats> history)
      : Error(what), nearest_(nearest), report_(std::move(report)), history_(std::move(history)) {}
  const DesignConfig& nearest() const noexcept { return nearest_; }
  const ModelReport& report() const noexcept { return report_; }
  const std::vector<GenerationStats>& history() const noexcept { return history_; }

 private:
  DesignConfig nearest_;
  ModelReport report_;
  std::vector<GenerationStats> history_;
};

/// Genetic search with elitism. Each generation: model every individual, drop the
/// infeasible ones, keep the better half of the distinct feasible configurations
/// (ranked by latency, then config key) as parents, refill with uniform crossover and
/// per-gene mutation. A generation with no feasible individual restarts from random
/// configurations. Stops after `stall_generations` consecutive generations whose best
/// latency changed by less than threshold * best, or at max_generations.
ExploreResult explore(const ProblemSpec& p, const PlatformSpec& platform, const Domains& domains,
                      const GaParams& ga, std::uint64_t seed);

}  // namespace accd::explorer
