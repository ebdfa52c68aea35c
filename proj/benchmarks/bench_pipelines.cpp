#include <benchmark/benchmark.h>

#include "accd/data/oracle.hpp"
#include "accd/data/synthetic.hpp"
#include "accd/ddsl/plan.hpp"
#include "accd/ddsl/templates.hpp"
#include "accd/pipelines/pipelines.hpp"

namespace {

using namespace accd;

const data::MetricSpec kL2 = data::MetricSpec::unweighted(data::MetricKind::L2);

void BM_KMeans(benchmark::State& state) {
  const auto pts = data::gaussian_mixture({20000, 16, 32, 1.0, 20.0}, 5);
  const auto plan = ddsl::compile(ddsl::kmeans_source(pts.size(), 32, pts.dim()));
  pipelines::RunConfig cfg;
  cfg.layout_enabled = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(pipelines::run_kmeans(plan, pts, cfg));
}
BENCHMARK(BM_KMeans)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_NaiveLloyd(benchmark::State& state) {
  const auto pts = data::gaussian_mixture({20000, 16, 32, 1.0, 20.0}, 5);
  const auto init = data::gaussian_mixture({32, 16, 32, 1.0, 20.0}, 6);
  for (auto _ : state) benchmark::DoNotOptimize(data::naive_lloyd(pts.view(), init.view(), kL2, 30));
}
BENCHMARK(BM_NaiveLloyd)->Unit(benchmark::kMillisecond);

void BM_KnnJoin(benchmark::State& state) {
  const auto src = data::gaussian_mixture({5000, 24, 40, 1.0, 30.0}, 1);
  const auto trg = data::gaussian_mixture({5000, 24, 40, 1.0, 30.0}, 2);
  const auto plan = ddsl::compile(ddsl::knn_source(src.size(), trg.size(), 24, 50));
  for (auto _ : state) benchmark::DoNotOptimize(pipelines::run_knn_join(plan, src, trg, {}));
}
BENCHMARK(BM_KnnJoin)->Unit(benchmark::kMillisecond);

void BM_BruteKnn(benchmark::State& state) {
  const auto src = data::gaussian_mixture({5000, 24, 40, 1.0, 30.0}, 1);
  const auto trg = data::gaussian_mixture({5000, 24, 40, 1.0, 30.0}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(data::brute_knn(src, trg, kL2, 50, data::Scope::Smallest));
}
BENCHMARK(BM_BruteKnn)->Unit(benchmark::kMillisecond);

void BM_NBody(benchmark::State& state) {
  const auto pts = data::gaussian_mixture({4096, 3, 16, 0.05, 1.0}, 21);
  const double r = data::radius_for_neighbors(pts, 50, 512, 1);
  const auto plan = ddsl::compile(ddsl::nbody_source(pts.size(), 3, 5, r));
  for (auto _ : state) benchmark::DoNotOptimize(pipelines::run_nbody(plan, pts, {}));
}
BENCHMARK(BM_NBody)->Unit(benchmark::kMillisecond);

}  // namespace
