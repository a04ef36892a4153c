#pragma once

#include <cstddef>
#include <span>

#include "kstar/dataset.hpp"
#include "kstar/matrix.hpp"

namespace kstar {

// Description length of a clustering, in nats.
//
//   model    = k * d * m               (centroids at precision m)
//   index    = N * ln k                (cluster id of every point)
//   residual = (N d ln 2pi + sum ||x - c(x)||^2) / 2
//
// The residual term keeps the N d ln(2 pi) / 2 constant so that totals are
// comparable across runs with different k.
struct MdlBreakdown {
  double model_cost = 0.0;
  double index_cost = 0.0;
  double residual_cost = 0.0;
  double total = 0.0;
};

// Sum of squared distances of the selected rows to their own mean.
// `rows` must be nonempty.
double total_ss(const Dataset& data, std::span<const std::size_t> rows);
// Same, over every row of the dataset.
double total_ss(const Dataset& data);

MdlBreakdown mdl_cost(const Dataset& data, const Matrix& centroids,
                      std::span<const std::size_t> assignments,
                      const PrecisionInfo& precision);

// Builds a breakdown from its sufficient statistics.
MdlBreakdown mdl_from_parts(std::size_t k, std::size_t n, std::size_t d,
                            double sum_squared_residuals,
                            const PrecisionInfo& precision);

// Exact change in total cost when one of k clusters is replaced by its two
// subclusters. The *_ss arguments are squared residual sums about the
// centroids that the clusters would have (before and after the move).
// Negative means the split shortens the description.
double split_delta(double parent_ss, double sub1_ss, double sub2_ss,
                   std::size_t k, std::size_t n_total,
                   const PrecisionInfo& precision, std::size_t d);

// Exact change in total cost when two of k clusters (k >= 2) are replaced by
// their union. Negative means the merge shortens the description.
double merge_delta(double merged_ss, double c1_ss, double c2_ss,
                   std::size_t k, std::size_t n_total,
                   const PrecisionInfo& precision, std::size_t d);

}  // namespace kstar
