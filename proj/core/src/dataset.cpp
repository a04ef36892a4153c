#include "kstar/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "kstar/error.hpp"

namespace kstar {

Dataset::Dataset(Matrix points) : points_(std::move(points)) {
  if (points_.rows() == 0) throw ContractError("dataset has no points");
  if (points_.cols() == 0) throw ContractError("dataset has no features");
  for (double v : points_.values()) {
    if (!std::isfinite(v)) throw ContractError("dataset contains a non-finite value");
  }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ContractError("dataset has no points");
  Matrix m(0, rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw ContractError("ragged row " + std::to_string(i + 1));
    }
    m.append_row(rows[i]);
  }
  return Dataset(std::move(m));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Matrix m(0, dim());
  for (std::size_t r : rows) {
    if (r >= n()) throw ContractError("subset row out of range");
    m.append_row(point(r));
  }
  return Dataset(std::move(m));
}

double fallback_bits_per_coord() noexcept { return 32.0 * std::numbers::ln2; }

PrecisionInfo precision_info(const Dataset& data) {
  std::vector<double> values(data.points().values().begin(),
                             data.points().values().end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  PrecisionInfo info;
  info.value_range = values.back() - values.front();
  if (values.size() >= 2) {
    double gap = values[1] - values[0];
    for (std::size_t i = 2; i < values.size(); ++i) {
      gap = std::min(gap, values[i] - values[i - 1]);
    }
    info.min_gap = gap;
  }
  if (info.min_gap > 0.0 && info.value_range > 0.0) {
    info.bits_per_coord = std::log(info.value_range / info.min_gap);
  } else {
    info.bits_per_coord = fallback_bits_per_coord();
  }
  return info;
}

std::vector<std::size_t> densify_labels(std::span<const std::size_t> labels) {
  std::unordered_map<std::size_t, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (std::size_t l : labels) {
    auto [it, inserted] = ids.try_emplace(l, ids.size());
    out.push_back(it->second);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

std::optional<double> parse_real(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

struct ParsedTable {
  Matrix features;
  std::vector<std::string> label_cells;
};

ParsedTable parse_table(const std::string& text,
                        const std::optional<ColumnSelector>& label_column,
                        const CsvOptions& opts, const std::string& source) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  {
    std::string_view rest(text);
    std::size_t line_no = 0;
    while (!rest.empty()) {
      const std::size_t nl = rest.find('\n');
      std::string_view line = rest.substr(0, nl);
      ++line_no;
      if (!trim(line).empty()) lines.emplace_back(line_no, line);
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }
  if (lines.empty()) throw ParseError(source + ": empty file");

  const auto where = [&](std::size_t line_no) {
    return source + ": row " + std::to_string(line_no);
  };

  const std::vector<std::string_view> first = split(lines.front().second, opts.delimiter);
  const std::size_t width = first.size();

  std::optional<std::size_t> label_index;
  bool has_header = opts.header == HeaderMode::kPresent;
  if (label_column && std::holds_alternative<std::size_t>(*label_column)) {
    label_index = std::get<std::size_t>(*label_column);
    if (*label_index >= width) {
      throw ParseError(source + ": label column " + std::to_string(*label_index) +
                       " out of range (" + std::to_string(width) + " columns)");
    }
  }
  if (opts.header == HeaderMode::kDetect) {
    if (label_column && std::holds_alternative<std::string>(*label_column)) {
      has_header = true;
    } else {
      for (std::size_t j = 0; j < width; ++j) {
        if (label_index && j == *label_index) continue;
        if (!parse_real(first[j])) has_header = true;
      }
    }
  }
  if (label_column && std::holds_alternative<std::string>(*label_column)) {
    if (!has_header) throw ParseError(source + ": label column by name requires a header");
    const std::string& name = std::get<std::string>(*label_column);
    auto it = std::find(first.begin(), first.end(), std::string_view(name));
    if (it == first.end()) throw ParseError(source + ": no column named '" + name + "'");
    label_index = static_cast<std::size_t>(it - first.begin());
  }

  const std::size_t n_features = width - (label_index ? 1 : 0);
  if (n_features == 0) throw ParseError(source + ": no feature columns");

  ParsedTable table{Matrix(0, n_features), {}};
  std::vector<double> row(n_features);
  for (std::size_t li = has_header ? 1 : 0; li < lines.size(); ++li) {
    const auto [line_no, line] = lines[li];
    const std::vector<std::string_view> cells = split(line, opts.delimiter);
    if (cells.size() != width) {
      throw ParseError(where(line_no) + ": expected " + std::to_string(width) +
                       " columns, found " + std::to_string(cells.size()));
    }
    std::size_t out = 0;
    for (std::size_t j = 0; j < width; ++j) {
      if (label_index && j == *label_index) {
        if (cells[j].empty()) {
          throw ParseError(where(line_no) + ", column " + std::to_string(j) + ": empty label");
        }
        table.label_cells.emplace_back(cells[j]);
        continue;
      }
      const auto value = parse_real(cells[j]);
      if (!value) {
        throw ParseError(where(line_no) + ", column " + std::to_string(j) +
                         ": cannot parse '" + std::string(cells[j]) + "' as a finite real");
      }
      row[out++] = *value;
    }
    table.features.append_row(row);
  }
  if (table.features.rows() == 0) throw ParseError(source + ": no data rows");
  return table;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error("failed reading " + path.string());
  return ss.str();
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvOptions& opts,
                  const std::string& source) {
  return Dataset(parse_table(text, std::nullopt, opts, source).features);
}

LabelledDataset parse_labelled_csv(const std::string& text,
                                   const ColumnSelector& label_column,
                                   const CsvOptions& opts,
                                   const std::string& source) {
  ParsedTable table = parse_table(text, label_column, opts, source);
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<std::size_t> labels;
  labels.reserve(table.label_cells.size());
  for (const std::string& cell : table.label_cells) {
    auto [it, inserted] = ids.try_emplace(cell, ids.size());
    labels.push_back(it->second);
  }
  return LabelledDataset{Dataset(std::move(table.features)), std::move(labels), ids.size()};
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& opts) {
  return parse_csv(read_file(path), opts, path.string());
}

LabelledDataset load_labelled_csv(const std::filesystem::path& path,
                                  const ColumnSelector& label_column,
                                  const CsvOptions& opts) {
  return parse_labelled_csv(read_file(path), label_column, opts, path.string());
}

}  // namespace kstar
