// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace warpspec {

/// Dense row-major matrix. Only what the symmetric solvers need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Matrix transposed() const;
  bool is_symmetric(double tol = 0.0) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class EigenBackend {
  kAuto,            // tridiagonal QL when possible, otherwise Householder + QL
  kHouseholderQL,
  kJacobi,
  // one-sided Jacobi on the flux factor of the stiffness; small eigenvalues
  // come out to high relative accuracy at O(n^3) per sweep
  kFactoredJacobi,
};

/// Eigenvalues ascending. When vectors were requested, row k of `vectors`
/// is the unit eigenvector for `values[k]`.
struct SymmetricEigenResult {
  std::vector<double> values;
  Matrix vectors;
};

/// Full eigendecomposition of a dense symmetric matrix.
/// Throws Error(kConvergenceFailure) when the iteration cap is hit.
SymmetricEigenResult symmetric_eigen(const Matrix& a, bool want_vectors,
                                     EigenBackend backend = EigenBackend::kAuto);

/// Eigendecomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and sub-diagonal `sub` (sub.size() == diag.size() - 1).
SymmetricEigenResult tridiagonal_eigen(std::span<const double> diag,
                                       std::span<const double> sub, bool want_vectors);

/// Eigendecomposition of G^T G, where row k of `columns` holds column k of
/// G, by one-sided Jacobi. Each eigenvalue is accurate relative to itself
/// rather than to the largest one.
SymmetricEigenResult gram_eigen(const Matrix& columns, bool want_vectors);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace warpspec
