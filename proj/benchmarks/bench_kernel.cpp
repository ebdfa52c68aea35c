#include <benchmark/benchmark.h>

#include "accd/data/brute.hpp"
#include "accd/data/synthetic.hpp"
#include "accd/kernel/kernel.hpp"

namespace {

using namespace accd;

const data::MetricSpec kL2 = data::MetricSpec::unweighted(data::MetricKind::L2);

void BM_BlockedL2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto blk = static_cast<std::size_t>(state.range(1));
  const auto a = data::uniform_points(n, 32, 1);
  const auto b = data::uniform_points(n, 32, 2);
  for (auto _ : state) {
    kernel::KernelCounters c;
    benchmark::DoNotOptimize(kernel::distances_blocked(a, b, kL2, {blk, 4, 4, 200e6}, c));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}
BENCHMARK(BM_BlockedL2)->ArgsProduct({{256, 1024}, {8, 64, 256}})->Unit(benchmark::kMillisecond);

void BM_BruteL2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = data::uniform_points(n, 32, 1);
  const auto b = data::uniform_points(n, 32, 2);
  for (auto _ : state) benchmark::DoNotOptimize(data::pairwise_brute(a, b, kL2));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}
BENCHMARK(BM_BruteL2)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
