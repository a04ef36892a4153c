#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kstar/dataset.hpp"
#include "kstar/matrix.hpp"
#include "kstar/mdl.hpp"
#include "kstar/random.hpp"

namespace kstar {

// State of a k*-means run. Every cluster i carries a pair of subcentroids
// (rows 2i and 2i+1 of `subcentroids`) and each of its points belongs to
// one of the two subclusters, which are the ready-made split candidates.
struct ClusterModel {
  Matrix centroids;                          // k x d
  std::vector<std::size_t> assignments;      // cluster of each point
  Matrix subcentroids;                       // 2k x d
  std::vector<std::uint8_t> subassignments;  // 0 or 1, within the cluster

  std::size_t k() const noexcept { return centroids.rows(); }
  std::span<const double> subcentroid(std::size_t cluster, std::uint8_t which) const noexcept {
    return subcentroids.row(2 * cluster + which);
  }

  friend bool operator==(const ClusterModel&, const ClusterModel&) = default;
};

struct FitConfig {
  std::uint64_t seed = kDefaultSeed;
  // Patience termination: stop once the best cost has not dropped by at
  // least min_improvement nats for `patience` consecutive cycles.
  std::size_t patience = 5;
  double min_improvement = 2.0;
  // Strict mode ignores patience and runs until a full cycle changes nothing.
  bool strict_convergence = false;
  std::size_t max_cycles = 10'000;
};

struct FitResult {
  ClusterModel model;
  MdlBreakdown cost;
  std::vector<double> cost_trace;  // total cost at the end of each cycle
  std::size_t n_cycles = 0;
  std::size_t split_count = 0;
  std::size_t merge_count = 0;
  double runtime_seconds = 0.0;

  std::size_t k() const noexcept { return model.k(); }
};

// Outcome of maybe_split / maybe_merge. `delta` is the exact cost change of
// the best candidate move (0 when there was no candidate); `cluster` is the
// split cluster or the lower index of the merged pair.
struct MoveOutcome {
  bool applied = false;
  double delta = 0.0;
  std::size_t cluster = 0;
};

enum class StepKind { kInit, kAssign, kUpdate, kSplit, kMerge };

// Reported to a fit observer after every step. For kSplit/kMerge the event
// is only emitted when the move was applied.
struct StepEvent {
  StepKind kind;
  std::size_t cycle;  // 0 for kInit
  bool changed;
  double delta;  // move cost change for kSplit/kMerge, 0 otherwise
  const ClusterModel& model;
};

using StepObserver = std::function<void(const StepEvent&)>;

// k-means++ seeding of two subcentroids over `members` (row indices into
// `data`). Returns a 2 x d matrix; both rows are the same point when the
// members coincide.
Matrix init_subcentroids(const Dataset& data, std::span<const std::size_t> members, Rng& rng);

// One cluster holding every point, centroid at the global mean.
ClusterModel initial_model(const Dataset& data, Rng& rng);

// Model with the given centroids and nearest-centroid assignments; each
// cluster's subcentroids are seeded from its points. Empty clusters are
// dropped.
ClusterModel model_from_centroids(const Dataset& data, const Matrix& centroids, Rng& rng);

// Nearest-centroid assignment (ties to the lowest index), then
// nearest-subcentroid assignment within each cluster (ties to 0). Empty
// clusters are removed and indices compacted in order. Returns whether any
// point changed cluster or subcluster.
bool assign_step(const Dataset& data, ClusterModel& model);

// Moves centroids and subcentroids to the means of their points. A cluster
// with an empty subcluster gets a fresh subcentroid pair and its points are
// re-split between them. Returns whether that re-split moved any point.
bool update_step(const Dataset& data, ClusterModel& model, Rng& rng);

// Splits the cluster whose exact split delta is most negative, if any.
MoveOutcome maybe_split(const Dataset& data, ClusterModel& model,
                        const PrecisionInfo& precision, Rng& rng);

// Merges the closest pair of centroids when that lowers the total cost.
MoveOutcome maybe_merge(const Dataset& data, ClusterModel& model,
                        const PrecisionInfo& precision);

FitResult fit(const Dataset& data, const FitConfig& config = {},
              const StepObserver& observer = {});

}  // namespace kstar
