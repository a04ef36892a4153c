#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kstar/matrix.hpp"

namespace kstar {

// N points in d dimensions. Immutable once constructed; the constructor
// rejects empty, ragged, or non-finite input.
class Dataset {
 public:
  explicit Dataset(Matrix points);
  // Convenience for tests and small fixtures: one inner vector per point.
  static Dataset from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t n() const noexcept { return points_.rows(); }
  std::size_t dim() const noexcept { return points_.cols(); }
  std::span<const double> point(std::size_t i) const noexcept {
    return points_.row(i);
  }
  const Matrix& points() const noexcept { return points_; }

  // Rows selected by index, in the given order.
  Dataset subset(std::span<const std::size_t> rows) const;

 private:
  Matrix points_;
};

// Dataset plus one ground-truth class id per point. Ids are dense:
// 0..num_classes-1, numbered by first appearance.
struct LabelledDataset {
  Dataset data;
  std::vector<std::size_t> labels;
  std::size_t num_classes = 0;
};

// Per-coordinate precision cost used by the model term of the MDL objective.
struct PrecisionInfo {
  double min_gap = 0.0;      // smallest gap between distinct scalar values
  double value_range = 0.0;  // max scalar minus min scalar
  double bits_per_coord = 0.0;  // nats per stored coordinate
};

// Cost charged per coordinate when the data has fewer than two distinct
// values: one single-precision float, in nats.
double fallback_bits_per_coord() noexcept;

// m = ln(range / min_gap) over the pooled scalar values of the dataset.
PrecisionInfo precision_info(const Dataset& data);

enum class HeaderMode {
  kAbsent,
  kPresent,
  // The first line is a header iff one of its feature cells is not a number.
  kDetect,
};

// Zero-based column index or header name.
using ColumnSelector = std::variant<std::size_t, std::string>;

struct CsvOptions {
  HeaderMode header = HeaderMode::kDetect;
  char delimiter = ',';
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& opts = {});

// The label column is excluded from the features.
LabelledDataset load_labelled_csv(const std::filesystem::path& path,
                                  const ColumnSelector& label_column,
                                  const CsvOptions& opts = {});

// Same parsers over in-memory text; `source` names the input in errors.
Dataset parse_csv(const std::string& text, const CsvOptions& opts = {},
                  const std::string& source = "<memory>");
LabelledDataset parse_labelled_csv(const std::string& text,
                                   const ColumnSelector& label_column,
                                   const CsvOptions& opts = {},
                                   const std::string& source = "<memory>");

// Relabels arbitrary ids densely by order of first appearance.
std::vector<std::size_t> densify_labels(std::span<const std::size_t> labels);

}  // namespace kstar
