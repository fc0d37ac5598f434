#pragma once

// Scattered-data interpolation with radial basis functions. Given K keys
// t_i in R^N and K samples s_i in R^M, fitting solves
//
//     (D + lambda I) W = S,   D_ij = phi(||t_i - t_j||),
//
// and evaluation at a query L returns xi * W with xi_i = phi(||L - t_i||).
// With lambda = 0 the interpolant reproduces every sample exactly at its
// key; lambda > 0 trades that for smoothing.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrbf/errors.hpp"
#include "qrbf/matrix.hpp"

namespace qrbf {

enum class KernelKind {
  Gaussian,             // exp(-(eps r)^2)
  Multiquadric,         // sqrt(1 + (eps r)^2)
  InverseQuadratic,     // 1 / (1 + (eps r)^2)
  InverseMultiquadric,  // 1 / sqrt(1 + (eps r)^2)
  Polyharmonic,         // r^eps (odd eps), r^eps ln r (even eps)
  ThinPlate,            // r^2 ln r
};

inline std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::Multiquadric: return "multiquadric";
    case KernelKind::InverseQuadratic: return "inverse_quadratic";
    case KernelKind::InverseMultiquadric: return "inverse_multiquadric";
    case KernelKind::Polyharmonic: return "polyharmonic";
    default: return "thinplate";
  }
}

inline KernelKind kernel_kind_from_string(std::string_view name) {
  for (KernelKind kind : {KernelKind::Gaussian, KernelKind::Multiquadric,
                          KernelKind::InverseQuadratic, KernelKind::InverseMultiquadric,
                          KernelKind::Polyharmonic, KernelKind::ThinPlate}) {
    if (name == to_string(kind)) return kind;
  }
  throw ParseError("unknown kernel type '" + std::string(name) + "'");
}

/// A radial kernel together with its shape parameter. epsilon scales the
/// radius for the infinitely smooth kernels and is the exponent of the
/// polyharmonic family, where it must be a positive integer.
struct Kernel {
  KernelKind kind = KernelKind::Polyharmonic;
  double epsilon = 1.0;

  Kernel() = default;
  Kernel(KernelKind kind_in, double epsilon_in) : kind(kind_in), epsilon(epsilon_in) {
    if (!std::isfinite(epsilon) || epsilon <= 0.0) {
      throw ParameterOutOfRangeError("Kernel: epsilon must be positive");
    }
    if (kind == KernelKind::Polyharmonic &&
        (epsilon != std::floor(epsilon) || epsilon < 1.0)) {
      throw ParameterOutOfRangeError("Kernel: polyharmonic exponent must be a positive integer");
    }
  }
};

/// phi(r) for r >= 0. The log-weighted kernels take their limit value 0
/// at r = 0.
inline double kernel_eval(const Kernel& k, double r) {
  const double er = k.epsilon * r;
  switch (k.kind) {
    case KernelKind::Gaussian:
      return std::exp(-er * er);
    case KernelKind::Multiquadric:
      return std::sqrt(1.0 + er * er);
    case KernelKind::InverseQuadratic:
      return 1.0 / (1.0 + er * er);
    case KernelKind::InverseMultiquadric:
      return 1.0 / std::sqrt(1.0 + er * er);
    case KernelKind::Polyharmonic: {
      const auto exponent = static_cast<int>(k.epsilon);
      if (exponent % 2 == 1) {
        return std::pow(r, exponent);
      }
      return r == 0.0 ? 0.0 : std::pow(r, exponent) * std::log(r);
    }
    default:  // ThinPlate
      return r == 0.0 ? 0.0 : r * r * std::log(r);
  }
}

/// Euclidean distance between equal-length vectors.
inline double distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw DimensionMismatchError("distance: vectors have different lengths");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

/// Pairwise kernel matrix D_ij = phi(||row_i - row_j||) for the rows of
/// `keys`. Built symmetric by construction (the j > i triangle mirrors
/// the lower one), with phi(0) down the diagonal.
inline Matrix distance_matrix(const Matrix& keys, const Kernel& kernel) {
  const std::size_t k = keys.rows();
  Matrix d(k, k);
  const double at_zero = kernel_eval(kernel, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    d(i, i) = at_zero;
    for (std::size_t j = 0; j < i; ++j) {
      const double value = kernel_eval(kernel, distance(keys.row(i), keys.row(j)));
      d(i, j) = value;
      d(j, i) = value;
    }
  }
  return d;
}

/// Immutable result of an RBF fit: the keys, the solved weight matrix,
/// and the kernel they were fit with.
class FittedSolver {
 public:
  /// Solve (D + lambda I) W = S. keys is K x N, samples is K x M, and the
  /// two must agree on K. lambda must be >= 0. Throws SingularMatrixError
  /// when the kernel matrix is singular, e.g. when two keys coincide.
  static FittedSolver fit(Matrix keys, const Matrix& samples, const Kernel& kernel,
                          double lambda = 0.0) {
    if (keys.rows() != samples.rows()) {
      throw DimensionMismatchError("fit: " + std::to_string(keys.rows()) + " keys vs " +
                                   std::to_string(samples.rows()) + " samples");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
      throw ParameterOutOfRangeError("fit: lambda must be a nonnegative finite scalar");
    }
    Matrix d = distance_matrix(keys, kernel);
    for (std::size_t i = 0; i < d.rows(); ++i) {
      d(i, i) += lambda;
    }
    Matrix weights = lu_solve(d, samples);
    return FittedSolver(kernel, std::move(keys), std::move(weights), lambda);
  }

  /// Reassemble a solver from stored parts (deserialization); performs
  /// shape checks only.
  static FittedSolver from_parts(const Kernel& kernel, Matrix keys, Matrix weights,
                                 double lambda = 0.0) {
    if (keys.rows() != weights.rows()) {
      throw DimensionMismatchError("solver parts disagree on the number of keys");
    }
    return FittedSolver(kernel, std::move(keys), std::move(weights), lambda);
  }

  /// Interpolate at a query point of the key dimension N.
  std::vector<double> eval(std::span<const double> query) const {
    if (query.size() != keys_.cols()) {
      throw DimensionMismatchError("eval: query has length " + std::to_string(query.size()) +
                                   ", keys have dimension " + std::to_string(keys_.cols()));
    }
    std::vector<double> out(weights_.cols(), 0.0);
    for (std::size_t i = 0; i < keys_.rows(); ++i) {
      const double xi = kernel_eval(kernel_, distance(query, keys_.row(i)));
      for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] += xi * weights_(i, j);
      }
    }
    return out;
  }

  const Kernel& kernel() const { return kernel_; }
  const Matrix& keys() const { return keys_; }
  const Matrix& weights() const { return weights_; }
  double lambda() const { return lambda_; }
  std::size_t key_count() const { return keys_.rows(); }
  std::size_t key_dimension() const { return keys_.cols(); }
  std::size_t sample_dimension() const { return weights_.cols(); }

 private:
  FittedSolver(const Kernel& kernel, Matrix keys, Matrix weights, double lambda)
      : kernel_(kernel), keys_(std::move(keys)), weights_(std::move(weights)), lambda_(lambda) {}

  Kernel kernel_;
  Matrix keys_;
  Matrix weights_;
  double lambda_;
};

}  // namespace qrbf
