#include "kstar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "kstar/error.hpp"

namespace kstar {
namespace {

std::vector<std::size_t> dense_ids(std::span<const std::size_t> labels, std::size_t& count) {
  std::unordered_map<std::size_t, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (std::size_t l : labels) out.push_back(ids.try_emplace(l, ids.size()).first->second);
  count = ids.size();
  return out;
}

double choose2(std::int64_t x) {
  return static_cast<double>(x) * static_cast<double>(x - 1) / 2.0;
}

double entropy(std::span<const std::int64_t> sums, double n) {
  double h = 0.0;
  for (std::int64_t s : sums) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

ContingencyTable contingency(std::span<const std::size_t> true_labels,
                             std::span<const std::size_t> pred_labels) {
  if (true_labels.size() != pred_labels.size()) {
    throw ContractError("contingency: label vectors differ in length (" +
                        std::to_string(true_labels.size()) + " vs " +
                        std::to_string(pred_labels.size()) + ")");
  }
  if (true_labels.empty()) throw ContractError("contingency: no labels");
  std::size_t r = 0, c = 0;
  const auto t = dense_ids(true_labels, r);
  const auto p = dense_ids(pred_labels, c);

  ContingencyTable table;
  table.counts.assign(r, std::vector<std::int64_t>(c, 0));
  table.row_sums.assign(r, 0);
  table.col_sums.assign(c, 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    ++table.counts[t[i]][p[i]];
    ++table.row_sums[t[i]];
    ++table.col_sums[p[i]];
  }
  table.n = static_cast<std::int64_t>(t.size());
  return table;
}

double accuracy(const ContingencyTable& table) {
  const std::size_t size = std::max(table.rows(), table.cols());
  // Maximise matched counts by minimising their negation; padding is zero.
  std::vector<std::vector<std::int64_t>> cost(size, std::vector<std::int64_t>(size, 0));
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) cost[i][j] = -table.counts[i][j];
  }
  const auto match = solve_assignment(cost);
  std::int64_t matched = 0;
  for (std::size_t i = 0; i < size; ++i) matched -= cost[i][match[i]];
  return static_cast<double>(matched) / static_cast<double>(table.n);
}

double ari(const ContingencyTable& table) {
  if (table.n < 2) throw ContractError("ari requires at least two points");
  double index = 0.0;
  for (const auto& row : table.counts) {
    for (std::int64_t v : row) index += choose2(v);
  }
  double sum_rows = 0.0, sum_cols = 0.0;
  for (std::int64_t a : table.row_sums) sum_rows += choose2(a);
  for (std::int64_t b : table.col_sums) sum_cols += choose2(b);
  const double expected = sum_rows * sum_cols / choose2(table.n);
  const double max_index = (sum_rows + sum_cols) / 2.0;
  const double denom = max_index - expected;
  if (denom == 0.0) {
    // Both partitions all-singletons or all-in-one: identical iff the
    // pair counts agree.
    return sum_rows == sum_cols && index == sum_rows ? 1.0 : 0.0;
  }
  return (index - expected) / denom;
}

double nmi(const ContingencyTable& table) {
  const double n = static_cast<double>(table.n);
  const double h_true = entropy(table.row_sums, n);
  const double h_pred = entropy(table.col_sums, n);
  if (h_true == 0.0 && h_pred == 0.0) return 1.0;
  if (h_true == 0.0 || h_pred == 0.0) return 0.0;
  double mi = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const std::int64_t nij = table.counts[i][j];
      if (nij == 0) continue;
      const double pij = static_cast<double>(nij) / n;
      mi += pij * std::log(n * static_cast<double>(nij) /
                           (static_cast<double>(table.row_sums[i]) *
                            static_cast<double>(table.col_sums[j])));
    }
  }
  return std::clamp(mi / std::max(h_true, h_pred), 0.0, 1.0);
}

KErrorStats k_error(std::size_t true_k, std::span<const std::size_t> predicted_ks) {
  const std::vector<std::size_t> truths(predicted_ks.size(), true_k);
  return k_error(truths, predicted_ks);
}

KErrorStats k_error(std::span<const std::size_t> true_ks,
                    std::span<const std::size_t> predicted_ks) {
  if (predicted_ks.empty()) throw ContractError("k_error: no predictions");
  if (true_ks.size() != predicted_ks.size()) throw ContractError("k_error: length mismatch");
  std::size_t exact = 0;
  double sq = 0.0;
  for (std::size_t i = 0; i < predicted_ks.size(); ++i) {
    exact += predicted_ks[i] == true_ks[i];
    const double diff = static_cast<double>(predicted_ks[i]) - static_cast<double>(true_ks[i]);
    sq += diff * diff;
  }
  const double count = static_cast<double>(predicted_ks.size());
  return KErrorStats{static_cast<double>(exact) / count, sq / count};
}

}  // namespace kstar
