#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kstar {

// Co-occurrence counts between true classes (rows) and predicted clusters
// (columns). Label values of either side are relabelled densely by first
// appearance, so ids need not be contiguous.
struct ContingencyTable {
  std::vector<std::vector<std::int64_t>> counts;  // rows x cols
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t n = 0;

  std::size_t rows() const noexcept { return row_sums.size(); }
  std::size_t cols() const noexcept { return col_sums.size(); }
};

ContingencyTable contingency(std::span<const std::size_t> true_labels,
                             std::span<const std::size_t> pred_labels);

// Best one-to-one matching of clusters to classes, as a fraction of n.
double accuracy(const ContingencyTable& table);

// Hubert-Arabie adjusted Rand index. Requires n >= 2.
double ari(const ContingencyTable& table);

// Mutual information over max(H(true), H(pred)), in nats.
double nmi(const ContingencyTable& table);

struct KErrorStats {
  double accuracy = 0.0;  // fraction of exact predictions
  double mse = 0.0;
};

KErrorStats k_error(std::size_t true_k, std::span<const std::size_t> predicted_ks);
// Element-wise version for mixed true k values.
KErrorStats k_error(std::span<const std::size_t> true_ks,
                    std::span<const std::size_t> predicted_ks);

// Minimum-cost perfect matching on a square cost matrix; returns the column
// assigned to each row.
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<std::int64_t>>& cost);

}  // namespace kstar
