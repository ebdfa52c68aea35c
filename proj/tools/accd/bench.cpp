#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "accd/data/oracle.hpp"
#include "accd/data/synthetic.hpp"
#include "accd/ddsl/plan.hpp"
#include "accd/ddsl/templates.hpp"
#include "accd/error.hpp"
#include "accd/pipelines/pipelines.hpp"
#include "accd/util/rng.hpp"
#include "commands.hpp"
#include "json.hpp"

namespace accd::cli {

namespace {

using json = nlohmann::ordered_json;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::size_t scaled(double base, double scale, std::size_t floor) {
  return std::max(floor, static_cast<std::size_t>(std::llround(base * scale)));
}

std::pair<data::Dataset, data::Dataset> split(const data::Dataset& all, std::size_t m) {
  const std::size_t d = all.dim();
  std::vector<double> a(all.values().begin(), all.values().begin() + static_cast<std::ptrdiff_t>(m * d));
  std::vector<double> b(all.values().begin() + static_cast<std::ptrdiff_t>(m * d), all.values().end());
  return {data::Dataset(m, d, std::move(a)), data::Dataset(all.size() - m, d, std::move(b))};
}

struct BenchRow {
  json dataset;
  std::uint64_t naive_distances = 0;
  bool oracle_match = false;
  pipelines::RunResult result;
  double naive_seconds = 0.0;
};

pipelines::RunConfig bench_config(std::uint64_t seed, std::size_t threads) {
  pipelines::RunConfig cfg;
  cfg.seed = seed;
  cfg.thread_count = threads;
  return cfg;
}

BenchRow bench_kmeans(double scale, std::uint64_t seed, std::size_t threads) {
  const std::size_t n = scaled(50000, scale, 64);
  const std::size_t d = 16;
  const std::size_t k = std::min<std::size_t>(32, n / 2);
  const data::Dataset points = data::gaussian_mixture({n, d, k, 1.0, 20.0}, seed);
  util::Rng rng(seed);
  std::vector<double> init;
  for (std::size_t p : util::sample_distinct(rng, n, k)) {
    init.insert(init.end(), points.row(p).begin(), points.row(p).end());
  }
  const data::Dataset centroids(k, d, init);
  const ddsl::ExecutionPlan plan = ddsl::compile(ddsl::kmeans_source(n, k, d));

  BenchRow row;
  row.dataset = json{{"generator", "gaussian_mixture"}, {"n", n}, {"d", d}, {"clusters", k}};
  row.result = pipelines::run_kmeans(plan, points, bench_config(seed, threads), centroids);
  Timer t;
  const auto trace = data::naive_lloyd(points.view(), centroids.view(), plan.metric, 100);
  row.naive_seconds = t.seconds();
  row.naive_distances = static_cast<std::uint64_t>(trace.assignments.size()) * n * k;
  row.oracle_match = trace.assignments == row.result.assignments;
  return row;
}

BenchRow bench_knn(double scale, std::uint64_t seed, std::size_t threads) {
  const std::size_t m = scaled(10000, scale, 64);
  const std::size_t d = 24;
  const std::size_t k = std::min<std::size_t>(50, m);
  const std::size_t components = std::max<std::size_t>(4, m / 250);
  const auto [src, trg] = split(data::gaussian_mixture({2 * m, d, components, 1.0, 20.0}, seed), m);
  const ddsl::ExecutionPlan plan = ddsl::compile(ddsl::knn_source(m, m, d, k));

  BenchRow row;
  row.dataset = json{{"generator", "gaussian_mixture"}, {"m", m}, {"n", m}, {"d", d}, {"components", components}, {"k", k}};
  row.result = pipelines::run_knn_join(plan, src, trg, bench_config(seed, threads));
  Timer t;
  const auto oracle = data::brute_knn(src, trg, plan.metric, k, data::Scope::Smallest);
  row.naive_seconds = t.seconds();
  row.naive_distances = static_cast<std::uint64_t>(m) * m;
  bool same = row.result.topk && row.result.topk->rows.size() == oracle.rows.size();
  for (std::size_t p = 0; same && p < oracle.rows.size(); ++p) {
    const auto& a = row.result.topk->rows[p];
    const auto& b = oracle.rows[p];
    same = a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) { return x.id == y.id; });
  }
  row.oracle_match = same;
  return row;
}

BenchRow bench_nbody(double scale, std::uint64_t seed, std::size_t threads) {
  const std::size_t n = scaled(16384, scale, 128);
  const std::size_t d = 3;
  const std::size_t steps = 5;
  const data::Dataset particles = data::gaussian_mixture({n, d, 16, 0.05, 1.0}, seed);
  const double radius = data::radius_for_neighbors(particles, std::min<std::size_t>(50, n - 1), 64, seed);
  const ddsl::ExecutionPlan plan = ddsl::compile(ddsl::nbody_source(n, d, steps, radius));

  BenchRow row;
  row.dataset = json{{"generator", "gaussian_mixture"}, {"n", n}, {"d", d}, {"steps", steps}, {"radius", radius}};
  row.result = pipelines::run_nbody(plan, particles, bench_config(seed, threads));
  Timer t;
  bool same = row.result.trajectory.size() == row.result.neighbors.size();
  for (std::size_t s = 0; same && s < row.result.trajectory.size(); ++s) {
    same = data::brute_radius(row.result.trajectory[s], plan.metric, radius) == row.result.neighbors[s];
  }
  row.naive_seconds = t.seconds();
  row.naive_distances = static_cast<std::uint64_t>(row.result.iterations) * n * n;
  row.oracle_match = same;
  return row;
}

}  // namespace

int cmd_bench(const BenchOptions& o) {
  if (!(o.scale > 0.0) || !std::isfinite(o.scale)) throw RangeError("bench: --scale must be > 0");
  BenchRow row;
  if (o.suite == "kmeans") {
    row = bench_kmeans(o.scale, o.seed, o.threads);
  } else if (o.suite == "knn") {
    row = bench_knn(o.scale, o.seed, o.threads);
  } else {
    row = bench_nbody(o.scale, o.seed, o.threads);
  }
  const auto& r = row.result;
  const std::uint64_t accd_total = r.point_distances + r.bound_computations + r.grouping_distances;
  const double reduction = 1.0 - static_cast<double>(accd_total) / static_cast<double>(row.naive_distances);

  json j;
  j["schema"] = "accd.bench/1";
  j["suite"] = o.suite;
  j["scale"] = o.scale;
  j["seed"] = o.seed;
  j["dataset"] = row.dataset;
  j["iterations"] = r.iterations;
  j["naive_distances"] = row.naive_distances;
  j["accd_distances"] = json{{"point", r.point_distances},
                             {"bound", r.bound_computations},
                             {"grouping", r.grouping_distances},
                             {"total", accd_total}};
  j["distance_reduction"] = reduction;
  j["measured_saving"] = r.measured_saving;
  j["per_iteration_saving"] = json::array();
  for (const auto& s : r.per_iteration) j["per_iteration_saving"].push_back(s.measured_saving);
  j["oracle_match"] = row.oracle_match;

  std::cout << std::left << std::setw(8) << "suite" << std::setw(8) << "iters" << std::setw(16) << "naive_dist"
            << std::setw(16) << "accd_dist" << std::setw(12) << "reduction" << std::setw(10) << "saving"
            << std::setw(12) << "wall_ratio" << "oracle\n";
  const double wall_ratio = r.wall_seconds > 0.0 ? row.naive_seconds / r.wall_seconds : 0.0;
  std::cout << std::setw(8) << o.suite << std::setw(8) << r.iterations << std::setw(16) << row.naive_distances
            << std::setw(16) << accd_total << std::setw(12) << std::setprecision(4) << reduction << std::setw(10)
            << r.measured_saving << std::setw(12) << wall_ratio << (row.oracle_match ? "match" : "MISMATCH")
            << '\n';
  if (o.json) {
    std::ofstream out(*o.json);
    if (!out) throw IoError("cannot write '" + *o.json + "'");
    out << j.dump(2) << '\n';
  }
  return row.oracle_match ? kOk : kRuntime;
}

}  // namespace accd::cli
