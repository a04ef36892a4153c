#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace kstar {

// Dense row-major matrix of doubles. Rows are exposed as spans so that
// per-point routines never see raw pointers.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
      : rows_(rows), cols_(cols), values_(std::move(values)) {
    assert(values_.size() == rows_ * cols_);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<double> row(std::size_t i) noexcept {
    assert(i < rows_);
    return {values_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const noexcept {
    assert(i < rows_);
    return {values_.data() + i * cols_, cols_};
  }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return values_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * cols_ + j];
  }

  std::span<const double> values() const noexcept { return values_; }

  void append_row(std::span<const double> r) {
    assert(r.size() == cols_ || rows_ == 0);
    if (rows_ == 0) cols_ = r.size();
    values_.insert(values_.end(), r.begin(), r.end());
    ++rows_;
  }
  void insert_row(std::size_t at, std::span<const double> r) {
    assert(at <= rows_ && r.size() == cols_);
    values_.insert(values_.begin() + static_cast<std::ptrdiff_t>(at * cols_),
                   r.begin(), r.end());
    ++rows_;
  }
  void erase_row(std::size_t at) {
    assert(at < rows_);
    auto first = values_.begin() + static_cast<std::ptrdiff_t>(at * cols_);
    values_.erase(first, first + static_cast<std::ptrdiff_t>(cols_));
    --rows_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) noexcept {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

}  // namespace kstar
