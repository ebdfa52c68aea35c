#include <benchmark/benchmark.h>

#include "accd/data/synthetic.hpp"
#include "accd/gti/filter.hpp"
#include "accd/gti/groups.hpp"

namespace {

using namespace accd;

const data::MetricSpec kL2 = data::MetricSpec::unweighted(data::MetricKind::L2);

void BM_BuildGroups(benchmark::State& state) {
  const auto pts = data::gaussian_mixture({20000, 16, 32, 1.0, 20.0}, 3);
  const auto z = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gti::build_groups(pts.view(), z, kL2, 7));
}
BENCHMARK(BM_BuildGroups)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_OneshotTopK(benchmark::State& state) {
  const auto src = data::gaussian_mixture({10000, 16, 32, 1.0, 20.0}, 3);
  const auto trg = data::gaussian_mixture({10000, 16, 32, 1.0, 20.0}, 4);
  const auto z = static_cast<std::size_t>(state.range(0));
  const auto gs = gti::build_groups(src.view(), z, kL2, 1);
  const auto gt = gti::build_groups(trg.view(), z, kL2, 2);
  const auto bounds = gti::compute_group_pair_bounds(gs, gt, kL2);
  for (auto _ : state) benchmark::DoNotOptimize(gti::filter_oneshot(gs, gt, bounds, gti::Query::top_k(50)));
}
BENCHMARK(BM_OneshotTopK)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace
