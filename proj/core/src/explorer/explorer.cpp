#include "accd/explorer/explorer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "accd/util/rng.hpp"

namespace accd::explorer {

namespace {

using Genes = std::array<std::size_t, 5>;  // indices into each domain

const std::vector<std::size_t>& domain_of(const Domains& d, std::size_t gene) {
  switch (gene) {
    case 0: return d.n_src_grp;
    case 1: return d.n_trg_grp;
    case 2: return d.blk;
    case 3: return d.simd;
    default: return d.unroll;
  }
}

DesignConfig decode(const Domains& d, const Genes& g) {
  return {d.n_src_grp[g[0]], d.n_trg_grp[g[1]], d.blk[g[2]], d.simd[g[3]], d.unroll[g[4]]};
}

Genes random_genes(const Domains& d, util::Rng& rng) {
  Genes g{};
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = util::uniform_index(rng, domain_of(d, i).size());
  return g;
}

double excess(const ModelReport& r) {
  double sum = 0.0;
  for (const auto& v : r.violated) sum += v.margin;
  return sum;
}

}  // namespace

std::uint64_t Domains::size() const noexcept {
  return static_cast<std::uint64_t>(n_src_grp.size()) * n_trg_grp.size() * blk.size() *
         simd.size() * unroll.size();
}

void Domains::check() const {
  static const char* names[5] = {"n_src_grp", "n_trg_grp", "blk", "simd", "unroll"};
  for (std::size_t i = 0; i < 5; ++i) {
    auto values = domain_of(*this, i);
    if (values.empty()) throw RangeError(std::string("domains: ") + names[i] + " is empty");
    std::sort(values.begin(), values.end());
    if (values.front() == 0) throw RangeError(std::string("domains: ") + names[i] + " contains 0");
    if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
      throw RangeError(std::string("domains: ") + names[i] + " has duplicates");
    }
  }
}

std::vector<DesignConfig> Domains::enumerate() const {
  std::vector<DesignConfig> out;
  out.reserve(size());
  for (auto a : n_src_grp)
    for (auto b : n_trg_grp)
      for (auto c : blk)
        for (auto s : simd)
          for (auto u : unroll) out.push_back({a, b, c, s, u});
  return out;
}

void GaParams::check() const {
  if (population < 4) throw RangeError("ga: population must be >= 4");
  if (!(mutation >= 0.0 && mutation <= 1.0)) throw RangeError("ga: mutation must be in [0,1]");
  if (!(crossover >= 0.0 && crossover <= 1.0)) throw RangeError("ga: crossover must be in [0,1]");
  if (!(threshold >= 0.0)) throw RangeError("ga: threshold must be >= 0");
  if (max_generations == 0) throw RangeError("ga: max_generations must be >= 1");
  if (stall_generations == 0) throw RangeError("ga: stall_generations must be >= 1");
}

ExploreResult explore(const ProblemSpec& p, const PlatformSpec& platform, const Domains& domains,
                      const GaParams& ga, std::uint64_t seed) {
  p.check();
  platform.check();
  domains.check();
  ga.check();
  for (auto b : domains.blk)
    for (auto s : domains.simd)
      for (auto u : domains.unroll) {
        if (!platform.resource_table.contains({b, s, u})) {
          throw TableMiss("resource table does not cover blk=" + std::to_string(b) +
                          " simd=" + std::to_string(s) + " unroll=" + std::to_string(u));
        }
      }

  util::Rng rng(seed);
  std::map<Genes, ModelReport> cache;
  auto model = [&](const Genes& g) -> const ModelReport& {
    auto it = cache.find(g);
    if (it == cache.end()) it = cache.emplace(g, evaluate(p, decode(domains, g), platform)).first;
    return it->second;
  };

  std::vector<Genes> population(ga.population);
  for (auto& g : population) g = random_genes(domains, rng);

  ExploreResult result;
  std::optional<Genes> best;
  std::optional<Genes> nearest;
  std::size_t stalled = 0;

  for (std::size_t gen = 0; gen < ga.max_generations; ++gen) {
    std::vector<std::pair<double, Genes>> feasible;
    GenerationStats stats;
    double sum = 0.0;
    for (const auto& g : population) {
      const ModelReport& r = model(g);
      if (r.feasible) {
        feasible.emplace_back(r.latency_total, g);
        sum += r.latency_total;
      } else if (!nearest || excess(r) < excess(model(*nearest)) ||
                 (excess(r) == excess(model(*nearest)) && decode(domains, g) < decode(domains, *nearest))) {
        nearest = g;
      }
    }
    stats.feasible_count = feasible.size();

    if (feasible.empty()) {
      result.history.push_back(stats);
      for (auto& g : population) g = random_genes(domains, rng);
      continue;
    }

    stats.mean = sum / static_cast<double>(feasible.size());
    std::sort(feasible.begin(), feasible.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return decode(domains, a.second) < decode(domains, b.second);
    });
    feasible.erase(std::unique(feasible.begin(), feasible.end(),
                               [](const auto& a, const auto& b) { return a.second == b.second; }),
                   feasible.end());
    stats.best = feasible.front().first;
    result.history.push_back(stats);

    const double prev = best ? model(*best).latency_total : std::numeric_limits<double>::infinity();
    if (!best || feasible.front().first < prev) best = feasible.front().second;
    const double now = model(*best).latency_total;
    if (gen > 0 && std::abs(prev - now) < ga.threshold * now) {
      if (++stalled >= ga.stall_generations) break;
    } else {
      stalled = 0;
    }

    const std::size_t keep = std::max<std::size_t>(1, feasible.size() / 2);
    std::vector<Genes> premium;
    premium.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) premium.push_back(feasible[i].second);

    population = premium;
    while (population.size() < ga.population) {
      const Genes& a = premium[util::uniform_index(rng, premium.size())];
      const Genes& b = premium[util::uniform_index(rng, premium.size())];
      Genes child = a;
      if (util::uniform_unit(rng) < ga.crossover) {
        for (std::size_t i = 0; i < child.size(); ++i) {
          if (util::uniform_unit(rng) < 0.5) child[i] = b[i];
        }
      }
      for (std::size_t i = 0; i < child.size(); ++i) {
        if (util::uniform_unit(rng) < ga.mutation) {
          child[i] = util::uniform_index(rng, domain_of(domains, i).size());
        }
      }
      population.push_back(child);
    }
  }

  result.evaluations = cache.size();
  if (!best) {
    const Genes miss = nearest.value_or(population.front());
    throw NoFeasibleConfig("no feasible configuration within " +
                               std::to_string(ga.max_generations) + " generations",
                           decode(domains, miss), model(miss), std::move(result.history));
  }
  result.best = decode(domains, *best);
  result.report = model(*best);
  return result;
}

}  // namespace accd::explorer
