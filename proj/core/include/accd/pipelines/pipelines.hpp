#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "accd/data/dataset.hpp"
#include "accd/data/topk.hpp"
#include "accd/ddsl/plan.hpp"
#include "accd/kernel/kernel.hpp"
#include "accd/layout/layout.hpp"

namespace accd::pipelines {

enum class OracleMode { Off, Shadow };

/// Force on particle `self` from its neighbors (IDs ascending). Writes the acceleration.
using ForceRule = std::function<void(data::MatrixView positions, std::size_t self,
                                     std::span<const std::size_t> neighbors, std::span<double> accel)>;

/// Softened attraction: a_i = sum_j (x_j - x_i) / (|x_j - x_i|^2 + eps^2)^{3/2}, unit mass.
ForceRule softened_attraction(double softening);

struct RunConfig {
  kernel::KernelConfig kernel;
  std::optional<std::size_t> n_src_grp;  // chosen from the data size when absent
  std::optional<std::size_t> n_trg_grp;
  std::uint64_t seed = 0;
  bool layout_enabled = true;
  std::size_t n_banks = 4;
  OracleMode oracle_mode = OracleMode::Off;
  std::size_t thread_count = 1;
  std::size_t max_iter = 100;  // cap for programs that loop on a status flag
  double dt = 1e-3;
  double softening = 0.05;
  ForceRule force;  // softened_attraction(softening) when empty

  void check() const;
};

/// Counters for one iteration (one step for N-body, the single pass for KNN-join).
/// point_distances + pruned_group_pairs + pruned_point_pairs + all_inside_pairs == total_pairs.
struct IterationStats {
  std::uint64_t point_distances = 0;
  std::uint64_t bound_computations = 0;
  std::uint64_t pruned_group_pairs = 0;
  std::uint64_t pruned_point_pairs = 0;
  std::uint64_t all_inside_pairs = 0;
  std::uint64_t total_pairs = 0;
  std::uint64_t source_groups_active = 0;  // source groups with at least one candidate
  std::uint64_t candidate_runs = 0;        // kernel batches; < source_groups_active when batched
  std::uint64_t tiles = 0;
  std::uint64_t exact_rechecks = 0;  // direct-formula evaluations for pairs the kernel cannot settle
  double modeled_cycles = 0.0;
  double measured_saving = 0.0;
  bool status = true;  // the update status flag S after this iteration

  std::uint64_t pruned_pairs() const noexcept { return pruned_group_pairs + pruned_point_pairs; }
};

struct RunResult {
  ddsl::PipelineKind kind = ddsl::PipelineKind::OneshotTwoSet;
  std::size_t iterations = 0;
  bool converged = false;  // exited because S became false

  // iterative_two_set
  std::vector<std::vector<std::uint32_t>> assignments;  // per iteration, original point order
  std::vector<double> centroids;                        // final, k x d
  std::size_t clusters = 0;
  // oneshot_two_set
  std::optional<data::TopKResult> topk;
  // iterative_self_set
  std::vector<std::vector<std::vector<std::size_t>>> neighbors;  // per step, per point, IDs ascending
  std::vector<data::Dataset> trajectory;                          // positions at the start of each step

  std::vector<IterationStats> per_iteration;
  std::uint64_t grouping_distances = 0;
  std::uint64_t point_distances = 0;
  std::uint64_t bound_computations = 0;
  std::uint64_t pruned_pairs = 0;
  std::uint64_t exact_rechecks = 0;
  double measured_saving = 0.0;  // averaged over iterations
  kernel::KernelCounters kernel;
  std::size_t src_groups = 0;
  std::size_t trg_groups = 0;
  std::optional<layout::LayoutPlan> layout;  // source-side packing, when the optimizer ran
  bool oracle_checked = false;
  double wall_seconds = 0.0;
};

/// K-means-like: iteration 1 computes every point-centroid distance; later iterations
/// prune with trace bounds on centroid drift. Clusters start at `initial_centroids`, or at
/// plan.target_set.size points sampled with config.seed.
RunResult run_kmeans(const ddsl::ExecutionPlan& plan, const data::Dataset& points,
                     const RunConfig& config,
                     std::optional<data::Dataset> initial_centroids = std::nullopt);

/// KNN-join-like: top-K of every source point over the target set.
RunResult run_knn_join(const ddsl::ExecutionPlan& plan, const data::Dataset& src,
                       const data::Dataset& trg, const RunConfig& config);

/// N-body-like: per step, every pair within the selection radius, then an explicit Euler
/// update with the configured force rule. Velocities start at zero unless given.
RunResult run_nbody(const ddsl::ExecutionPlan& plan, const data::Dataset& particles,
                    const RunConfig& config,
                    std::optional<std::vector<double>> initial_velocities = std::nullopt);

/// Dispatches on plan.pipeline_kind. `trg` is required for the two-set kinds (K-means
/// takes it as initial centroids) and must be absent for the self-set kind.
RunResult run(const ddsl::ExecutionPlan& plan, const data::Dataset& src,
              const std::optional<data::Dataset>& trg, const RunConfig& config);

/// Checks the data against the declared set shapes. With `allow_dim_from_data` the plan's
/// sizes and dimensions are replaced by the data's; otherwise a difference throws
/// DimensionMismatch. Throws RangeError when K exceeds the target rows.
ddsl::ExecutionPlan conform_plan(ddsl::ExecutionPlan plan, const data::Dataset& src,
                                 const std::optional<data::Dataset>& trg, bool allow_dim_from_data);

/// Binds weights from a 1 x d data set to a weighted plan metric.
void bind_weights(ddsl::ExecutionPlan& plan, const data::Dataset& weights);

}  // namespace accd::pipelines
