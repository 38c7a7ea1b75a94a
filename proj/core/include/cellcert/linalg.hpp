#pragma once

#include <span>
#include <vector>

namespace cellcert {

/// Dense row-major matrix of doubles. Plain value type; shape is fixed at
/// construction.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}
  Matrix(int rows, int cols, std::vector<double> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& at(int i, int j) {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  std::span<const double> row(int i) const {
    return {a_.data() + static_cast<std::size_t>(i) * cols_,
            static_cast<std::size_t>(cols_)};
  }
  std::span<double> row(int i) {
    return {a_.data() + static_cast<std::size_t>(i) * cols_,
            static_cast<std::size_t>(cols_)};
  }

  const std::vector<double>& data() const { return a_; }
  bool all_finite() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

/// Smallest singular value, one-sided Jacobi. High relative accuracy even for
/// tiny singular values; sized for the dense problems here (cols <= a few
/// hundred). Throws std::invalid_argument on empty or non-finite input.
double min_singular_value(const Matrix& g);

/// All singular values, descending.
std::vector<double> singular_values(const Matrix& g);

/// Largest absolute eigenvalue of a symmetric matrix (= operator norm).
/// Asymmetry beyond 1e-10 is rejected.
double operator_norm(const Matrix& sym);

/// Eigenvalues of a symmetric matrix via cyclic Jacobi, ascending.
std::vector<double> symmetric_eigenvalues(const Matrix& sym);

// Small vector helpers shared across modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void normalize_in_place(std::span<double> a);

}  // namespace cellcert
