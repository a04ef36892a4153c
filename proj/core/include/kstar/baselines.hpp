#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kstar/dataset.hpp"
#include "kstar/matrix.hpp"
#include "kstar/random.hpp"

namespace kstar {

struct KmeansResult {
  Matrix centroids;
  std::vector<std::size_t> assignments;
  double inertia = 0.0;  // sum of squared distances to assigned centroids
  std::size_t n_iters = 0;

  std::size_t k() const noexcept { return centroids.rows(); }
};

// k-means++ seeding. Once every remaining point coincides with a chosen
// centroid, further centroids are drawn uniformly from the unchosen points.
Matrix kmeanspp_init(const Dataset& data, std::size_t k, Rng& rng);

// Lloyd iterations from the given centroids: assign (ties to the lowest
// index), re-seed empty clusters at the point farthest from its centroid,
// move centroids to their means. Stops when an iteration changes neither
// assignments nor centroids, or after max_iters iterations.
KmeansResult lloyd_from(const Dataset& data, Matrix centroids, std::size_t max_iters = 300);

// k-means++ seeding followed by lloyd_from.
KmeansResult lloyd(const Dataset& data, std::size_t k, Rng& rng, std::size_t max_iters = 300);

// Hard-assignment spherical Gaussian BIC, lower is better:
//   sigma^2 = inertia / (d (N - k))
//   loglik  = sum_i ln(N_c(i) / N) - d/2 ln(2 pi sigma^2) - ||x_i - mu||^2 / (2 sigma^2)
//   score   = ((k - 1) + k d + 1) ln N - 2 loglik
// Requires N > k.
double bic_score(const Dataset& data, const KmeansResult& result);

struct SweepReport {
  std::vector<std::size_t> candidate_ks;
  // +infinity for candidates that cannot be scored (k >= N).
  std::vector<double> bic_scores;
  std::size_t chosen_k = 0;
  KmeansResult chosen;
  double runtime_seconds = 0.0;
};

// { max(1, ceil(j N / 10)) : j = 1..10 }, ascending and deduplicated.
std::vector<std::size_t> default_sweep_grid(std::size_t n);

// Runs lloyd once per candidate k (one shared random stream, in grid order)
// and keeps the lowest BIC, ties to the smaller k.
SweepReport sweep_k_bic(const Dataset& data, Rng& rng,
                        std::optional<std::vector<std::size_t>> grid = std::nullopt);

}  // namespace kstar
