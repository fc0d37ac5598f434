#include "qrbf/rbf.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qrbf/errors.hpp"
#include "qrbf/matrix.hpp"
#include "test_support.hpp"

namespace qrbf {
namespace {

using test::gauss_jordan_inverse;
using test::make_rng;
using test::max_abs_diff;

TEST(Kernel, ValidatesShapeParameter) {
  EXPECT_THROW(Kernel(KernelKind::Gaussian, 0.0), ParameterOutOfRangeError);
  EXPECT_THROW(Kernel(KernelKind::Gaussian, -1.0), ParameterOutOfRangeError);
  EXPECT_THROW(Kernel(KernelKind::Polyharmonic, 1.5), ParameterOutOfRangeError);
  EXPECT_THROW(Kernel(KernelKind::Polyharmonic, 0.5), ParameterOutOfRangeError);
  EXPECT_NO_THROW(Kernel(KernelKind::Polyharmonic, 2.0));
  EXPECT_NO_THROW(Kernel(KernelKind::ThinPlate, 2.5));  // epsilon unused but must be > 0
}

TEST(Kernel, DefaultIsLinearPolyharmonic) {
  const Kernel k;
  EXPECT_EQ(k.kind, KernelKind::Polyharmonic);
  EXPECT_EQ(k.epsilon, 1.0);
  EXPECT_EQ(kernel_eval(k, 3.5), 3.5);  // phi(r) = r
}

TEST(Kernel, NamesRoundTrip) {
  for (KernelKind kind : {KernelKind::Gaussian, KernelKind::Multiquadric,
                          KernelKind::InverseQuadratic, KernelKind::InverseMultiquadric,
                          KernelKind::Polyharmonic, KernelKind::ThinPlate}) {
    EXPECT_EQ(kernel_kind_from_string(to_string(kind)), kind);
  }
  EXPECT_THROW(kernel_kind_from_string("sombrero"), ParseError);
}

TEST(KernelEval, SpotValuesAtUnitRadius) {
  // At r = 1, eps = 1: e^-1, sqrt(2), 1/2, 1/sqrt(2).
  EXPECT_NEAR(kernel_eval(Kernel(KernelKind::Gaussian, 1.0), 1.0),
              0.367879441171442322, 1e-15);
  EXPECT_NEAR(kernel_eval(Kernel(KernelKind::Multiquadric, 1.0), 1.0),
              1.414213562373095049, 1e-15);
  EXPECT_NEAR(kernel_eval(Kernel(KernelKind::InverseQuadratic, 1.0), 1.0), 0.5, 1e-15);
  EXPECT_NEAR(kernel_eval(Kernel(KernelKind::InverseMultiquadric, 1.0), 1.0),
              0.707106781186547524, 1e-15);
}

TEST(KernelEval, PolyharmonicFamily) {
  EXPECT_EQ(kernel_eval(Kernel(KernelKind::Polyharmonic, 1.0), 2.0), 2.0);   // r
  EXPECT_EQ(kernel_eval(Kernel(KernelKind::Polyharmonic, 3.0), 2.0), 8.0);   // r^3
  // Even exponents carry the log factor: 2^2 ln 2.
  EXPECT_NEAR(kernel_eval(Kernel(KernelKind::Polyharmonic, 2.0), 2.0),
              2.772588722239781238, 1e-15);
  // The r -> 0 limit of r^k ln r is 0 and must not produce -inf or NaN.
  EXPECT_EQ(kernel_eval(Kernel(KernelKind::Polyharmonic, 2.0), 0.0), 0.0);
  EXPECT_EQ(kernel_eval(Kernel(KernelKind::Polyharmonic, 1.0), 0.0), 0.0);
}

TEST(KernelEval, ThinPlate) {
  EXPECT_NEAR(kernel_eval(Kernel(KernelKind::ThinPlate, 1.0), 2.0),
              2.772588722239781238, 1e-15);  // 4 ln 2
  EXPECT_EQ(kernel_eval(Kernel(KernelKind::ThinPlate, 1.0), 0.0), 0.0);
  EXPECT_EQ(kernel_eval(Kernel(KernelKind::ThinPlate, 1.0), 1.0), 0.0);  // ln 1 = 0
}

TEST(KernelEval, EpsilonScalesTheRadius) {
  // Gaussian with eps = 2 at r matches eps = 1 at 2r.
  const Kernel wide(KernelKind::Gaussian, 1.0);
  const Kernel narrow(KernelKind::Gaussian, 2.0);
  for (double r : {0.1, 0.5, 1.3}) {
    EXPECT_NEAR(kernel_eval(narrow, r), kernel_eval(wide, 2.0 * r), 1e-15);
  }
}

TEST(Distance, KnownValuesAndErrors) {
  const std::vector<double> u{1.0, 1.0, 1.0};
  const std::vector<double> v{1.0, -1.0, 1.0};
  EXPECT_EQ(distance(u, v), 2.0);
  EXPECT_EQ(distance(u, u), 0.0);
  const std::vector<double> shorter{1.0, 2.0};
  EXPECT_THROW(distance(u, shorter), DimensionMismatchError);
}

TEST(DistanceMatrix, TwoPointLine) {
  // Keys 0 and 1 on a line with phi(r) = r: D = [[0, 1], [1, 0]].
  const Matrix keys{{0.0}, {1.0}};
  const Matrix d = distance_matrix(keys, Kernel());
  EXPECT_EQ(d(0, 0), 0.0);
  EXPECT_EQ(d(0, 1), 1.0);
  EXPECT_EQ(d(1, 0), 1.0);
  EXPECT_EQ(d(1, 1), 0.0);
}

TEST(DistanceMatrix, ExactlySymmetricWithUnitDiagonal) {
  auto gen = make_rng(5101u);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  Matrix keys(7, 3);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 3; ++j) keys(i, j) = coord(gen);
  }
  const Matrix d = distance_matrix(keys, Kernel(KernelKind::Gaussian, 0.8));
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(d(i, i), 1.0);  // gaussian at r = 0
    for (std::size_t j = 0; j < 7; ++j) {
      EXPECT_EQ(d(i, j), d(j, i));  // bitwise, not just approximately
    }
  }
}

TEST(Fit, TwoPointLineHandSolved) {
  // D = [[0, 1], [1, 0]], S = [[0], [1]]  =>  W = [[1], [0]], and the
  // interpolant is phi(|x|) * 1 + phi(|x - 1|) * 0 = |x|.
  const Matrix keys{{0.0}, {1.0}};
  const Matrix samples{{0.0}, {1.0}};
  const FittedSolver solver = FittedSolver::fit(keys, samples, Kernel());
  EXPECT_NEAR(solver.weights()(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(solver.weights()(1, 0), 0.0, 1e-15);

  const std::vector<double> mid = solver.eval(std::vector<double>{0.5});
  ASSERT_EQ(mid.size(), 1u);
  EXPECT_NEAR(mid[0], 0.5, 1e-15);
}

TEST(Fit, SingleKeyScalesByKernelRatio) {
  // With one key the weight is s / phi(0) and evaluation is
  // phi(d) / phi(0) * s. Gaussian: eval([1,0]) = 2 e^-1.
  const Matrix keys{{0.0, 0.0}};
  const Matrix samples{{2.0}};
  const FittedSolver solver = FittedSolver::fit(keys, samples, Kernel(KernelKind::Gaussian, 1.0));
  const std::vector<double> out = solver.eval(std::vector<double>{1.0, 0.0});
  EXPECT_NEAR(out[0], 0.735758882342884643, 1e-15);
}

TEST(Fit, ReproducesSamplesAtKeys) {
  auto gen = make_rng(5102u);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const Kernel kernels[] = {Kernel(KernelKind::Gaussian, 1.0),
                            Kernel(KernelKind::Multiquadric, 1.0),
                            Kernel(KernelKind::InverseQuadratic, 1.0),
                            Kernel(KernelKind::InverseMultiquadric, 1.0),
                            Kernel(KernelKind::Polyharmonic, 1.0),
                            Kernel(KernelKind::Polyharmonic, 3.0),
                            Kernel(KernelKind::ThinPlate, 1.0)};
  for (const Kernel& kernel : kernels) {
    const std::size_t k = 12, n = 3, m = 4;
    Matrix keys(k, n);
    Matrix samples(k, m);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < n; ++j) keys(i, j) = coord(gen);
      for (std::size_t j = 0; j < m; ++j) samples(i, j) = 3.0 * coord(gen);
    }
    const FittedSolver solver = FittedSolver::fit(keys, samples, kernel);
    double norm_s = max_abs(samples);
    for (std::size_t i = 0; i < k; ++i) {
      const std::vector<double> out = solver.eval(keys.row(i));
      for (std::size_t j = 0; j < m; ++j) {
        EXPECT_NEAR(out[j], samples(i, j), 1e-8 * (1.0 + norm_s))
            << "kernel " << to_string(kernel.kind) << " eps " << kernel.epsilon;
      }
    }
  }
}

TEST(Fit, PermutingKeysDoesNotChangeTheInterpolant) {
  auto gen = make_rng(5103u);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const std::size_t k = 6;
  Matrix keys(k, 2), samples(k, 2);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      keys(i, j) = coord(gen);
      samples(i, j) = coord(gen);
    }
  }
  // Reverse the rows of both.
  Matrix rkeys(k, 2), rsamples(k, 2);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      rkeys(i, j) = keys(k - 1 - i, j);
      rsamples(i, j) = samples(k - 1 - i, j);
    }
  }
  const Kernel kernel(KernelKind::Gaussian, 1.0);
  const FittedSolver a = FittedSolver::fit(keys, samples, kernel);
  const FittedSolver b = FittedSolver::fit(rkeys, rsamples, kernel);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> query{coord(gen), coord(gen)};
    const std::vector<double> ya = a.eval(query);
    const std::vector<double> yb = b.eval(query);
    EXPECT_NEAR(ya[0], yb[0], 1e-10);
    EXPECT_NEAR(ya[1], yb[1], 1e-10);
  }
}

TEST(Fit, DuplicateKeysAreSingular) {
  const Matrix keys{{0.0, 0.0}, {1.0, 2.0}, {0.0, 0.0}};
  const Matrix samples{{1.0}, {2.0}, {3.0}};
  EXPECT_THROW(FittedSolver::fit(keys, samples, Kernel()), SingularMatrixError);
  EXPECT_THROW(FittedSolver::fit(keys, samples, Kernel(KernelKind::Gaussian, 1.0)),
               SingularMatrixError);
}

TEST(Fit, ShapeAndParameterErrors) {
  const Matrix keys{{0.0}, {1.0}};
  const Matrix samples{{0.0}};
  EXPECT_THROW(FittedSolver::fit(keys, samples, Kernel()), DimensionMismatchError);
  const Matrix ok{{0.0}, {1.0}};
  EXPECT_THROW(FittedSolver::fit(keys, ok, Kernel(), -0.5), ParameterOutOfRangeError);
}

TEST(Fit, RegularizationMatchesDirectSolveAndTradesAccuracy) {
  // Oracle: W_lambda = (D + lambda I)^-1 S computed with the independent
  // Gauss-Jordan inverse. The residual at the nodes grows monotonically
  // with lambda for a positive-definite kernel matrix.
  auto gen = make_rng(5104u);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const std::size_t k = 8;
  Matrix keys(k, 2), samples(k, 3);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < 2; ++j) keys(i, j) = coord(gen);
    for (std::size_t j = 0; j < 3; ++j) samples(i, j) = coord(gen);
  }
  const Kernel kernel(KernelKind::Gaussian, 1.0);
  const Matrix d = distance_matrix(keys, kernel);

  double previous_residual = -1.0;
  for (double lambda : {0.0, 1e-4, 1e-2, 1.0, 10.0}) {
    const FittedSolver solver = FittedSolver::fit(keys, samples, kernel, lambda);
    EXPECT_EQ(solver.lambda(), lambda);

    Matrix ridge = d;
    for (std::size_t i = 0; i < k; ++i) ridge(i, i) += lambda;
    const Matrix w_oracle = gauss_jordan_inverse(ridge) * samples;
    EXPECT_LT(max_abs_diff(solver.weights(), w_oracle), 1e-9);

    double residual = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const std::vector<double> out = solver.eval(keys.row(i));
      for (std::size_t j = 0; j < 3; ++j) {
        residual = std::max(residual, std::fabs(out[j] - samples(i, j)));
      }
    }
    EXPECT_GE(residual, previous_residual - 1e-12);
    previous_residual = residual;
  }
  // By lambda = 10 the fit must be visibly biased toward zero.
  EXPECT_GT(previous_residual, 1e-3);
}

TEST(Eval, QueryDimensionChecked) {
  const Matrix keys{{0.0, 0.0}};
  const Matrix samples{{1.0}};
  const FittedSolver solver = FittedSolver::fit(keys, samples, Kernel(KernelKind::Gaussian, 1.0));
  EXPECT_THROW(solver.eval(std::vector<double>{1.0}), DimensionMismatchError);
  EXPECT_THROW(solver.eval(std::vector<double>{1.0, 2.0, 3.0}), DimensionMismatchError);
}

TEST(FromParts, ValidatesShapes) {
  EXPECT_THROW(FittedSolver::from_parts(Kernel(), Matrix(2, 3), Matrix(3, 1)),
               DimensionMismatchError);
  const FittedSolver solver = FittedSolver::from_parts(Kernel(), Matrix{{0.0}, {1.0}},
                                                       Matrix{{1.0}, {0.0}});
  EXPECT_EQ(solver.key_count(), 2u);
  EXPECT_NEAR(solver.eval(std::vector<double>{0.5})[0], 0.5, 1e-15);
}

}  // namespace
}  // namespace qrbf
