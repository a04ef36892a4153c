#include "kstar/mdl.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "kstar/error.hpp"

namespace kstar {
namespace {

constexpr double kLn2Pi = 1.8378770664093454836;  // ln(2 pi)

}  // namespace

double total_ss(const Dataset& data, std::span<const std::size_t> rows) {
  if (rows.empty()) throw ContractError("total_ss of an empty set");
  const std::size_t d = data.dim();
  std::vector<double> mean(d, 0.0);
  for (std::size_t r : rows) {
    const auto p = data.point(r);
    for (std::size_t j = 0; j < d; ++j) mean[j] += p[j];
  }
  for (double& v : mean) v /= static_cast<double>(rows.size());
  double ss = 0.0;
  for (std::size_t r : rows) ss += squared_distance(data.point(r), mean);
  return ss;
}

double total_ss(const Dataset& data) {
  std::vector<std::size_t> rows(data.n());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return total_ss(data, rows);
}

MdlBreakdown mdl_from_parts(std::size_t k, std::size_t n, std::size_t d,
                            double sum_squared_residuals,
                            const PrecisionInfo& precision) {
  MdlBreakdown b;
  const double nd = static_cast<double>(n) * static_cast<double>(d);
  b.model_cost = static_cast<double>(k) * static_cast<double>(d) * precision.bits_per_coord;
  b.index_cost = k > 1 ? static_cast<double>(n) * std::log(static_cast<double>(k)) : 0.0;
  b.residual_cost = (nd * kLn2Pi + sum_squared_residuals) / 2.0;
  b.total = b.model_cost + b.index_cost + b.residual_cost;
  return b;
}

MdlBreakdown mdl_cost(const Dataset& data, const Matrix& centroids,
                      std::span<const std::size_t> assignments,
                      const PrecisionInfo& precision) {
  const std::size_t k = centroids.rows();
  if (k == 0) throw ContractError("mdl_cost needs at least one centroid");
  if (assignments.size() != data.n()) {
    throw ContractError("mdl_cost: assignment count differs from point count");
  }
  if (centroids.cols() != data.dim()) {
    throw ContractError("mdl_cost: centroid dimension differs from data dimension");
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (assignments[i] >= k) {
      throw ContractError("mdl_cost: assignment " + std::to_string(assignments[i]) +
                          " of point " + std::to_string(i) + " out of range");
    }
    ss += squared_distance(data.point(i), centroids.row(assignments[i]));
  }
  return mdl_from_parts(k, data.n(), data.dim(), ss, precision);
}

double split_delta(double parent_ss, double sub1_ss, double sub2_ss,
                   std::size_t k, std::size_t n_total,
                   const PrecisionInfo& precision, std::size_t d) {
  const double kd = static_cast<double>(k);
  const double index_change =
      static_cast<double>(n_total) * (std::log(kd + 1.0) - std::log(kd));
  return static_cast<double>(d) * precision.bits_per_coord + index_change -
         (parent_ss - sub1_ss - sub2_ss) / 2.0;
}

double merge_delta(double merged_ss, double c1_ss, double c2_ss,
                   std::size_t k, std::size_t n_total,
                   const PrecisionInfo& precision, std::size_t d) {
  if (k < 2) throw ContractError("merge_delta requires at least two clusters");
  const double kd = static_cast<double>(k);
  // ln(1) is exactly zero, so k = 2 needs no special case.
  const double index_change =
      static_cast<double>(n_total) * (std::log(kd) - std::log(kd - 1.0));
  return (merged_ss - c1_ss - c2_ss) / 2.0 - index_change -
         static_cast<double>(d) * precision.bits_per_coord;
}

}  // namespace kstar
