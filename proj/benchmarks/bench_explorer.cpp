#include <benchmark/benchmark.h>

#include "accd/explorer/explorer.hpp"

namespace {

using namespace accd;

explorer::PlatformSpec synthetic_platform() {
  explorer::PlatformSpec p;
  p.bw_max = 1e10;
  p.mem_max = 2500;
  p.cu_max = 1500;
  p.lu_max = 250000;
  for (const std::size_t b : {16, 32, 64, 128, 256}) {
    for (const std::size_t s : {1, 2, 4, 8, 16}) {
      for (const std::size_t u : {1, 2, 4, 8, 16}) {
        const double scale = static_cast<double>(s * u) * static_cast<double>(b) / 64.0;
        p.resource_table[{b, s, u}] = {0.05 * scale, 0.02 * scale, 20.0 * scale};
      }
    }
  }
  return p;
}

const explorer::ProblemSpec kProblem{20000, 64, 32, 20, 1.0, 32};
const explorer::Domains kDomains{{16, 32, 64, 128, 256}, {2, 4, 8, 16}, {16, 32, 64, 128, 256},
                                 {1, 2, 4, 8, 16}, {1, 2, 4, 8, 16}};

void BM_Exhaustive(benchmark::State& state) {
  const auto platform = synthetic_platform();
  for (auto _ : state) {
    double best = 1e300;
    for (const auto& c : kDomains.enumerate()) {
      const auto r = explorer::evaluate(kProblem, c, platform);
      if (r.feasible && r.latency_total < best) best = r.latency_total;
    }
    benchmark::DoNotOptimize(best);
  }
}
BENCHMARK(BM_Exhaustive)->Unit(benchmark::kMicrosecond);

void BM_Genetic(benchmark::State& state) {
  const auto platform = synthetic_platform();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(explorer::explore(kProblem, platform, kDomains, {}, seed++));
    } catch (const explorer::NoFeasibleConfig&) {
    }
  }
}
BENCHMARK(BM_Genetic)->Unit(benchmark::kMicrosecond);

}  // namespace
