#include "kstar/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "kstar/error.hpp"

namespace kstar {
namespace {

void check_k(const Dataset& data, std::size_t k) {
  if (k == 0) throw ContractError("k must be at least 1");
  if (k > data.n()) {
    throw ContractError("k = " + std::to_string(k) + " exceeds the number of points (" +
                        std::to_string(data.n()) + ")");
  }
}

double inertia_of(const Dataset& data, const Matrix& centroids,
                  std::span<const std::size_t> assignments) {
  double s = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    s += squared_distance(data.point(i), centroids.row(assignments[i]));
  }
  return s;
}

}  // namespace

Matrix kmeanspp_init(const Dataset& data, std::size_t k, Rng& rng) {
  check_k(data, k);
  const std::size_t n = data.n();
  Matrix centroids(0, data.dim());
  std::vector<bool> chosen(n, false);
  std::vector<double> weights(n, std::numeric_limits<double>::infinity());

  std::size_t pick = uniform_index(rng, n);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      pick = weighted_index(rng, weights);
      if (pick == n) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < n; ++i) {
          if (!chosen[i]) open.push_back(i);
        }
        pick = open[uniform_index(rng, open.size())];
      }
    }
    chosen[pick] = true;
    centroids.append_row(data.point(pick));
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] = chosen[i] ? 0.0
                             : std::min(weights[i], squared_distance(data.point(i), data.point(pick)));
    }
  }
  return centroids;
}

KmeansResult lloyd_from(const Dataset& data, Matrix centroids, std::size_t max_iters) {
  if (centroids.rows() == 0 || centroids.cols() != data.dim()) {
    throw ContractError("lloyd_from: centroid shape does not match data");
  }
  check_k(data, centroids.rows());
  const std::size_t n = data.n();
  const std::size_t d = data.dim();
  const std::size_t k = centroids.rows();

  KmeansResult result;
  result.assignments.assign(n, k);  // k marks "unassigned"
  std::vector<double> dist(n);
  Matrix sums(k, d);
  std::vector<std::size_t> counts(k);

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = data.point(i);
      std::size_t best = 0;
      double best_d = squared_distance(p, centroids.row(0));
      for (std::size_t c = 1; c < k; ++c) {
        const double dc = squared_distance(p, centroids.row(c));
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      changed |= result.assignments[i] != best;
      result.assignments[i] = best;
      dist[i] = best_d;
    }

    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t a : result.assignments) ++counts[a];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // Re-seed at the point farthest from its centroid, taking it from a
      // cluster that can spare it.
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[result.assignments[i]] < 2) continue;
        if (far == n || dist[i] > dist[far]) far = i;
      }
      if (far == n) break;
      --counts[result.assignments[far]];
      result.assignments[far] = c;
      counts[c] = 1;
      dist[far] = 0.0;
      changed = true;
    }

    sums = Matrix(k, d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = data.point(i);
      auto row = sums.row(result.assignments[i]);
      for (std::size_t j = 0; j < d; ++j) row[j] += p[j];
    }
    bool moved = false;
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j = 0; j < d; ++j) {
        const double mean = sums(c, j) / static_cast<double>(counts[c]);
        moved |= mean != centroids(c, j);
        centroids(c, j) = mean;
      }
    }
    result.n_iters = iter + 1;
    if (!changed || !moved) break;
  }

  result.centroids = std::move(centroids);
  result.inertia = inertia_of(data, result.centroids, result.assignments);
  return result;
}

KmeansResult lloyd(const Dataset& data, std::size_t k, Rng& rng, std::size_t max_iters) {
  return lloyd_from(data, kmeanspp_init(data, k, rng), max_iters);
}

double bic_score(const Dataset& data, const KmeansResult& result) {
  const std::size_t n = data.n();
  const std::size_t k = result.k();
  if (n <= k) throw ContractError("bic_score requires more points than clusters");
  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(data.dim());
  const double kd = static_cast<double>(k);

  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : result.assignments) ++sizes[a];
  const double sigma2 = std::max(result.inertia / (dd * (nd - kd)), 1e-12);

  double loglik = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = result.assignments[i];
    loglik += std::log(static_cast<double>(sizes[c]) / nd);
    loglik -= squared_distance(data.point(i), result.centroids.row(c)) / (2.0 * sigma2);
  }
  loglik -= nd * dd / 2.0 * std::log(2.0 * std::numbers::pi * sigma2);

  const double params = (kd - 1.0) + kd * dd + 1.0;
  return params * std::log(nd) - 2.0 * loglik;
}

std::vector<std::size_t> default_sweep_grid(std::size_t n) {
  std::vector<std::size_t> grid;
  for (std::size_t j = 1; j <= 10; ++j) {
    grid.push_back(std::max<std::size_t>(1, (j * n + 9) / 10));
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

SweepReport sweep_k_bic(const Dataset& data, Rng& rng,
                        std::optional<std::vector<std::size_t>> grid) {
  const auto start = std::chrono::steady_clock::now();
  SweepReport report;
  report.candidate_ks = grid ? std::move(*grid) : default_sweep_grid(data.n());
  std::sort(report.candidate_ks.begin(), report.candidate_ks.end());
  report.candidate_ks.erase(std::unique(report.candidate_ks.begin(), report.candidate_ks.end()),
                            report.candidate_ks.end());
  if (report.candidate_ks.empty()) throw ContractError("sweep grid is empty");
  if (report.candidate_ks.front() == 0) throw ContractError("sweep grid contains k = 0");

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k : report.candidate_ks) {
    if (k >= data.n()) {
      report.bic_scores.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    KmeansResult fitted = lloyd(data, k, rng);
    const double score = bic_score(data, fitted);
    report.bic_scores.push_back(score);
    if (score < best) {
      best = score;
      report.chosen_k = k;
      report.chosen = std::move(fitted);
    }
  }
  if (report.chosen_k == 0) {
    // No candidate could be scored; keep the smallest one that still fits.
    const std::size_t k = report.candidate_ks.front();
    if (k > data.n()) throw ContractError("every sweep candidate exceeds the number of points");
    report.chosen = lloyd(data, k, rng);
    report.chosen_k = k;
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace kstar
