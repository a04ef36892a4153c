#include "kstar/synth.hpp"

#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "kstar/error.hpp"
#include "kstar/metrics.hpp"

namespace kstar {
namespace {

constexpr int kBridsonAttempts = 30;

// One Bridson pass over a square of the given side. Returns the accepted
// points in acceptance order, stopping once `want` points exist.
std::vector<std::array<double, 2>> bridson_pass(std::size_t want, double r, double side,
                                                Rng& rng) {
  const double cell = r / std::numbers::sqrt2;
  const auto grid_n = static_cast<std::size_t>(std::ceil(side / cell));
  std::vector<std::optional<std::size_t>> grid(grid_n * grid_n);
  std::vector<std::array<double, 2>> points;
  std::vector<std::size_t> active;

  const double half = side / 2.0;
  const auto cell_of = [&](double v) {
    const auto c = static_cast<std::size_t>((v + half) / cell);
    return std::min(c, grid_n - 1);
  };
  const auto accept = [&](std::array<double, 2> p) {
    grid[cell_of(p[1]) * grid_n + cell_of(p[0])] = points.size();
    active.push_back(points.size());
    points.push_back(p);
  };
  const auto fits = [&](std::array<double, 2> p) {
    if (p[0] < -half || p[0] >= half || p[1] < -half || p[1] >= half) return false;
    const std::size_t cx = cell_of(p[0]);
    const std::size_t cy = cell_of(p[1]);
    const std::size_t x0 = cx >= 2 ? cx - 2 : 0, x1 = std::min(cx + 2, grid_n - 1);
    const std::size_t y0 = cy >= 2 ? cy - 2 : 0, y1 = std::min(cy + 2, grid_n - 1);
    for (std::size_t y = y0; y <= y1; ++y) {
      for (std::size_t x = x0; x <= x1; ++x) {
        const auto& slot = grid[y * grid_n + x];
        if (!slot) continue;
        const auto& q = points[*slot];
        const double dx = q[0] - p[0], dy = q[1] - p[1];
        if (dx * dx + dy * dy < r * r) return false;
      }
    }
    return true;
  };

  std::uniform_real_distribution<double> coord(-half, half);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  accept({coord(rng), coord(rng)});
  while (points.size() < want && !active.empty()) {
    const std::size_t slot = uniform_index(rng, active.size());
    const auto origin = points[active[slot]];
    bool placed = false;
    for (int attempt = 0; attempt < kBridsonAttempts && !placed; ++attempt) {
      const double angle = 2.0 * std::numbers::pi * unit(rng);
      const double radius = r * (1.0 + unit(rng));
      const std::array<double, 2> candidate{origin[0] + radius * std::cos(angle),
                                            origin[1] + radius * std::sin(angle)};
      if (fits(candidate)) {
        accept(candidate);
        placed = true;
      }
    }
    if (!placed) {
      active[slot] = active.back();
      active.pop_back();
    }
  }
  return points;
}

}  // namespace

double bridson_initial_side(std::size_t k, double min_sep) {
  return min_sep * (std::ceil(std::sqrt(static_cast<double>(k))) + 2.0);
}

Matrix bridson_sample(std::size_t k, double min_sep, Rng& rng) {
  if (k == 0) throw ContractError("bridson_sample: k must be at least 1");
  if (!(min_sep > 0.0)) throw ContractError("bridson_sample: min_sep must be positive");
  double side = bridson_initial_side(k, min_sep);
  while (true) {
    auto points = bridson_pass(k, min_sep, side, rng);
    if (points.size() >= k) {
      Matrix out(k, 2);
      for (std::size_t i = 0; i < k; ++i) {
        out(i, 0) = points[i][0];
        out(i, 1) = points[i][1];
      }
      return out;
    }
    side *= 2.0;
  }
}

SynthInstance generate(const SynthSpec& spec) {
  if (spec.dim != 2) throw ContractError("synthetic generator only supports 2-D data");
  if (spec.true_k == 0) throw ContractError("true_k must be at least 1");
  if (!(spec.min_sep > 0.0)) throw ContractError("min_sep must be positive");
  if (spec.total_points < spec.true_k) throw ContractError("total_points must be >= true_k");

  Rng rng(spec.seed);
  Matrix centroids = bridson_sample(spec.true_k, spec.min_sep, rng);

  const std::size_t base = spec.total_points / spec.true_k;
  const std::size_t extra = spec.total_points % spec.true_k;
  std::normal_distribution<double> noise(0.0, 1.0);
  Matrix points(0, 2);
  std::vector<std::size_t> labels;
  labels.reserve(spec.total_points);
  for (std::size_t c = 0; c < spec.true_k; ++c) {
    const std::size_t count = base + (c < extra ? 1 : 0);
    for (std::size_t i = 0; i < count; ++i) {
      const double x = centroids(c, 0) + noise(rng);
      const double y = centroids(c, 1) + noise(rng);
      points.append_row(std::array<double, 2>{x, y});
      labels.push_back(c);
    }
  }
  return SynthInstance{Dataset(std::move(points)), std::move(labels), std::move(centroids)};
}

std::uint64_t cell_data_seed(std::uint64_t base, std::size_t k, double sep, std::size_t rep) {
  return derive_seed(base, k, std::bit_cast<std::uint64_t>(sep), 2 * rep);
}

std::uint64_t cell_algorithm_seed(std::uint64_t base, std::size_t k, double sep,
                                  std::size_t rep) {
  return derive_seed(base, k, std::bit_cast<std::uint64_t>(sep), 2 * rep + 1);
}

KRecoveryReport k_recovery_experiment(const KRecoveryOptions& options,
                                      const KPredictor& predictor) {
  if (options.k_values.empty()) throw ContractError("k_recovery_experiment: no k values");
  if (options.sep_values.empty()) throw ContractError("k_recovery_experiment: no separations");
  if (options.reps == 0) throw ContractError("k_recovery_experiment: reps must be positive");

  KRecoveryReport report;
  std::map<double, std::vector<std::size_t>> predictions_by_sep;
  std::map<double, std::vector<std::size_t>> truths_by_sep;
  for (double sep : options.sep_values) {
    for (std::size_t k : options.k_values) {
      for (std::size_t rep = 0; rep < options.reps; ++rep) {
        KRecoveryCell cell{k, sep, rep, 0, false, 0.0};
        try {
          SynthSpec spec;
          spec.true_k = k;
          spec.min_sep = sep;
          spec.total_points = options.total_points;
          spec.seed = cell_data_seed(options.base_seed, k, sep, rep);
          const SynthInstance instance = generate(spec);
          const auto start = std::chrono::steady_clock::now();
          cell.predicted_k =
              predictor(instance.data, cell_algorithm_seed(options.base_seed, k, sep, rep));
          cell.runtime_seconds =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        } catch (const std::exception& e) {
          std::ostringstream msg;
          msg << "cell (k=" << k << ", sep=" << sep << ", rep=" << rep << "): " << e.what();
          throw Error(msg.str());
        }
        cell.exact = cell.predicted_k == k;
        report.cells.push_back(cell);
        predictions_by_sep[sep].push_back(cell.predicted_k);
        truths_by_sep[sep].push_back(k);
      }
    }
  }

  std::vector<std::size_t> all_pred, all_true;
  for (const auto& [sep, preds] : predictions_by_sep) {
    const auto& truths = truths_by_sep[sep];
    const KErrorStats stats = k_error(truths, preds);
    report.per_sep[sep] = KRecoverySummary{preds.size(), stats.accuracy, stats.mse};
    all_pred.insert(all_pred.end(), preds.begin(), preds.end());
    all_true.insert(all_true.end(), truths.begin(), truths.end());
  }
  const KErrorStats overall = k_error(all_true, all_pred);
  report.overall = KRecoverySummary{all_pred.size(), overall.accuracy, overall.mse};
  return report;
}

}  // namespace kstar
