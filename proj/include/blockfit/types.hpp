#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockfit {

using Index = std::int64_t;
using LabelVector = std::vector<int>;  // community labels, 0-based

// Input/parse problems: bad files, malformed lines, out-of-range indices.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures: eigensolver non-convergence and friends.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Minimal dense row-major matrix; used only for small K-by-K blocks and
// n-by-K score/eigenvector panels.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Index rows, Index cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols), fill) {}

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  double& operator()(Index i, Index j) { return data_[static_cast<size_t>(i * cols_ + j)]; }
  double operator()(Index i, Index j) const { return data_[static_cast<size_t>(i * cols_ + j)]; }
  double* row(Index i) { return data_.data() + i * cols_; }
  const double* row(Index i) const { return data_.data() + i * cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& storage() { return data_; }
  const std::vector<double>& storage() const { return data_; }
  bool operator==(const Matrix& o) const = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

}  // namespace blockfit
