#pragma once

// Small dense row-major matrix plus the two linear-algebra routines the
// rest of the library needs: an LU solver with partial pivoting and a
// condition-number estimate. Matrices here are tiny (pose counts, not
// meshes), so clarity wins over blocking/SIMD tricks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrbf/errors.hpp"

namespace qrbf {

/// Relative pivot threshold below which LU factorization reports the
/// matrix as singular.
inline constexpr double kSingularPivotRatio = 1e-12;

class Matrix {
 public:
  /// rows x cols matrix, zero-filled.
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) {
      throw DimensionMismatchError("matrix dimensions must be nonzero");
    }
    data_.assign(rows * cols, 0.0);
  }

  /// Construct from row-major data. Every entry must be finite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0 || data_.size() != rows * cols) {
      throw DimensionMismatchError("matrix data does not match dimensions");
    }
    for (double v : data_) {
      if (!std::isfinite(v)) {
        throw ParameterOutOfRangeError("matrix entries must be finite");
      }
    }
  }

  /// Brace construction: Matrix m{{1, 2}, {3, 4}};
  Matrix(std::initializer_list<std::initializer_list<double>> rows)
      : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    if (rows_ == 0 || cols_ == 0) {
      throw DimensionMismatchError("matrix dimensions must be nonzero");
    }
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) {
        throw DimensionMismatchError("ragged initializer for matrix");
      }
      for (double v : row) {
        if (!std::isfinite(v)) {
          throw ParameterOutOfRangeError("matrix entries must be finite");
        }
        data_.push_back(v);
      }
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatchError("matrix product: inner dimensions differ");
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

/// Largest absolute entry.
inline double max_abs(const Matrix& m) {
  double best = 0.0;
  for (double v : m.data()) best = std::max(best, std::fabs(v));
  return best;
}

/// Induced 1-norm (maximum absolute column sum).
inline double one_norm(const Matrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) sum += std::fabs(m(i, j));
    best = std::max(best, sum);
  }
  return best;
}

namespace detail {

// Packed LU factors of P*A (unit lower triangle below the diagonal, U on
// and above it) together with the row permutation. `singular` is set when
// some pivot falls below kSingularPivotRatio * max|A|.
struct LuFactors {
  Matrix packed;
  std::vector<std::size_t> perm;
  bool singular = false;
};

inline LuFactors lu_factor(const Matrix& a) {
  const std::size_t n = a.rows();
  LuFactors f{a, std::vector<std::size_t>(n), false};
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

  const double threshold = kSingularPivotRatio * max_abs(a);
  if (threshold == 0.0) {  // all-zero matrix
    f.singular = true;
    return f;
  }

  Matrix& lu = f.packed;
  for (std::size_t k = 0; k < n; ++k) {
    // Pick the largest remaining entry in column k as the pivot.
    std::size_t pivot_row = k;
    double pivot_mag = std::fabs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double mag = std::fabs(lu(i, k));
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = i;
      }
    }
    if (pivot_mag < threshold) {
      f.singular = true;
      return f;
    }
    if (pivot_row != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot_row, j));
      std::swap(f.perm[k], f.perm[pivot_row]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = lu(i, k) / lu(k, k);
      lu(i, k) = factor;
      for (std::size_t j = k + 1; j < n; ++j) {
        lu(i, j) -= factor * lu(k, j);
      }
    }
  }
  return f;
}

// Forward/back substitution for every column of B.
inline Matrix lu_substitute(const LuFactors& f, const Matrix& b) {
  const std::size_t n = f.packed.rows();
  Matrix x(n, b.cols());
  for (std::size_t col = 0; col < b.cols(); ++col) {
    // Ly = Pb
    for (std::size_t i = 0; i < n; ++i) {
      double sum = b(f.perm[i], col);
      for (std::size_t j = 0; j < i; ++j) sum -= f.packed(i, j) * x(j, col);
      x(i, col) = sum;
    }
    // Ux = y
    for (std::size_t ii = n; ii-- > 0;) {
      double sum = x(ii, col);
      for (std::size_t j = ii + 1; j < n; ++j) sum -= f.packed(ii, j) * x(j, col);
      x(ii, col) = sum / f.packed(ii, ii);
    }
  }
  return x;
}

}  // namespace detail

/// Solve A*X = B for X by LU factorization with partial pivoting. A must
/// be square with as many rows as B. Throws SingularMatrixError when a
/// pivot collapses (relative to max|A|), which for kernel matrices means
/// two interpolation nodes coincide.
inline Matrix lu_solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatchError("lu_solve: matrix must be square");
  }
  if (b.rows() != a.rows()) {
    throw DimensionMismatchError("lu_solve: right-hand side has " +
                                 std::to_string(b.rows()) + " rows, expected " +
                                 std::to_string(a.rows()));
  }
  detail::LuFactors f = detail::lu_factor(a);
  if (f.singular) {
    throw SingularMatrixError("lu_solve: matrix is singular to working precision");
  }
  return detail::lu_substitute(f, b);
}

/// Estimate the 1-norm condition number ||A||_1 * ||A^-1||_1. Returns
/// +infinity when A is singular to working precision, and always at
/// least 1 otherwise. A must be square.
inline double condition_estimate(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatchError("condition_estimate: matrix must be square");
  }
  detail::LuFactors f = detail::lu_factor(a);
  if (f.singular) {
    return std::numeric_limits<double>::infinity();
  }
  const Matrix inverse = detail::lu_substitute(f, Matrix::identity(a.rows()));
  return std::max(1.0, one_norm(a) * one_norm(inverse));
}

}  // namespace qrbf
