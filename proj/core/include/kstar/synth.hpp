#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "kstar/dataset.hpp"
#include "kstar/matrix.hpp"
#include "kstar/random.hpp"

namespace kstar {

struct SynthSpec {
  std::size_t true_k = 1;
  double min_sep = 5.0;
  std::size_t total_points = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::size_t dim = 2;  // only 2 is supported
};

struct SynthInstance {
  Dataset data;
  std::vector<std::size_t> labels;
  Matrix centroids_true;  // true_k x 2
};

// Bridson Poisson-disk sampling of k points in the plane with pairwise
// distance >= min_sep. The domain is a square of side
// min_sep * (ceil(sqrt(k)) + 2) centred at the origin; it is doubled and the
// sampler restarted whenever the packing saturates before k points.
Matrix bridson_sample(std::size_t k, double min_sep, Rng& rng);

// Side of the initial sampling square for k points.
double bridson_initial_side(std::size_t k, double min_sep);

// Bridson centroids with floor(total / k) unit-variance Gaussian points
// each; the first total % k centroids get one extra point.
SynthInstance generate(const SynthSpec& spec);

// Predicts k for a dataset; receives a per-run seed.
using KPredictor = std::function<std::size_t(const Dataset&, std::uint64_t seed)>;

struct KRecoveryCell {
  std::size_t true_k = 0;
  double min_sep = 0.0;
  std::size_t rep = 0;
  std::size_t predicted_k = 0;
  bool exact = false;
  double runtime_seconds = 0.0;
};

struct KRecoverySummary {
  std::size_t runs = 0;
  double accuracy = 0.0;  // fraction with predicted_k == true_k
  double mse = 0.0;       // mean (predicted_k - true_k)^2
};

struct KRecoveryReport {
  std::vector<KRecoveryCell> cells;  // ordered by (min_sep, k, rep)
  std::map<double, KRecoverySummary> per_sep;
  KRecoverySummary overall;
};

struct KRecoveryOptions {
  std::vector<std::size_t> k_values;
  std::vector<double> sep_values;
  std::size_t reps = 1;
  std::size_t total_points = 1000;
  std::uint64_t base_seed = kDefaultSeed;
};

// Seeds for one (k, sep, rep) cell: data generation and the predictor.
std::uint64_t cell_data_seed(std::uint64_t base, std::size_t k, double sep, std::size_t rep);
std::uint64_t cell_algorithm_seed(std::uint64_t base, std::size_t k, double sep, std::size_t rep);

KRecoveryReport k_recovery_experiment(const KRecoveryOptions& options,
                                      const KPredictor& predictor);

}  // namespace kstar
