// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "sgmor/frequency.hpp"
#include "sgmor/lyapunov.hpp"

using namespace sgmor;

TEST_CASE("scalar Lyapunov equation")
{
  // a m e + e m a = -f
  const Matrix M = SolveLyapDirect(Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, -3.0),
                                   Matrix::Constant(1, 1, 1.0));
  CHECK(M(0, 0) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("direct solver agrees with the Kronecker oracle")
{
  testing::Gen g(3);
  for (int trial = 0; trial < 20; trial++)
  {
    const Index n = g.Int(1, 12);
    const auto [E, A] = g.StablePair(n);
    const Matrix F = g.Spd(n);
    const Matrix M = SolveLyapDirect(E, A, F);
    const Matrix K = testing::KroneckerLyapunov(E, A, F);
    CHECK((M - K).norm() <= 1e-9 * K.norm());
    CHECK(LyapResidual(E, A, F, M) < 1e-12);
    CHECK((M - M.transpose()).norm() == 0.0);
  }
}

TEST_CASE("solution stays accurate for an ill-conditioned mass matrix")
{
  // Regularized-DAE-like E: one block scaled by 1e-10.
  testing::Gen g(5);
  const Index n = 20;
  auto [E, A] = g.DissipativePair(n);
  E.bottomRightCorner(5, 5) *= 1e-10;
  E.topRightCorner(n - 5, 5).setZero();
  E.bottomLeftCorner(5, n - 5).setZero();
  const Matrix F = Matrix::Identity(n, n);
  const Matrix M = SolveLyapDirect(E, A, F);
  CHECK(LyapResidual(E, A, F, M) < 1e-8);
  CHECK(testing::MinEig(M) > 0.0);
}

TEST_CASE("unstable pencil and singular E are rejected")
{
  Matrix E = Matrix::Identity(2, 2);
  Matrix A(2, 2);
  A << 0.1, 1.0, 0.0, -1.0;
  CHECK_THROWS_AS(SolveLyapDirect(E, A, Matrix::Identity(2, 2)), NumericalError);
  A << -1.0, 0.0, 0.0, -1.0;
  E(1, 1) = 0.0;
  CHECK_THROWS_AS(SolveLyapDirect(E, A, Matrix::Identity(2, 2)), NumericalError);
  CHECK_THROWS_AS(SolveLyapDirect(Matrix::Identity(2, 2), Matrix::Identity(3, 3),
                                  Matrix::Identity(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("accuracy bound formula")
{
  Matrix E = Matrix::Identity(2, 2) * 2.0;
  Matrix A = Matrix::Identity(2, 2) * -4.0;
  CHECK(AccuracyBound(E, A) == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("frequency rule integrates 1/(1 + w^2) over the real line")
{
  for (double scale : {0.5, 1.0, 7.0})
  {
    const FrequencyRule rule = FrequencyRule::GaussLegendre(256, scale);
    double sum = 0.0;
    for (std::size_t j = 0; j < rule.Omegas().size(); j++)
    {
      const double w = rule.Omegas()[j];
      sum += rule.FoldedWeights()[j] * 1.0 / (1.0 + w * w);
    }
    // Folded weights include the 1/(2 pi) factor.
    CHECK(sum == doctest::Approx(0.5).epsilon(1e-10));
  }
}

TEST_CASE("H2 of 1/(s + 1) is 1/sqrt(2)")
{
  LtiSystem sys{Matrix::Identity(1, 1).sparseView(), Matrix::Constant(1, 1, -1.0).sparseView(),
                Matrix::Ones(1, 1).sparseView(), Matrix::Ones(1, 1).sparseView()};
  const H2Estimate est = EstimateH2Norm(sys);
  CHECK(std::abs(est.value - 1.0 / std::sqrt(2.0)) < 1e-8);
  CHECK(est.converged);
  CHECK_FALSE(est.possibly_infinite);
}

TEST_CASE("H2 by quadrature agrees with the gramian formula")
{
  testing::Gen g(17);
  for (int trial = 0; trial < 10; trial++)
  {
    const Index n = g.Int(1, 15);
    const auto [E, A] = g.StablePair(n);
    const Matrix B = g.Gaussian(n, 2), C = g.Gaussian(3, n);
    LtiSystem sys{E.sparseView(), A.sparseView(), B.sparseView(), C.sparseView()};
    H2Options opts;
    opts.rtol = 1e-10;
    const double h2 = EstimateH2Norm(sys, opts).value;
    const double ref = testing::GramianH2(E, A, B, C);
    CHECK(std::abs(h2 - ref) <= 1e-7 * ref);
  }
}

TEST_CASE("non-decaying transfer function is flagged as possibly infinite")
{
  // Index-1 DAE with feedthrough: y = x2, 0 = -x2 + u.
  Matrix E = Matrix::Zero(2, 2);
  E(0, 0) = 1.0;
  Matrix A = -Matrix::Identity(2, 2);
  LtiSystem sys{E.sparseView(), A.sparseView(), Matrix::Ones(2, 1).sparseView(),
                (Matrix(1, 2) << 0, 1).finished().sparseView()};
  const H2Estimate est = EstimateH2Norm(sys);
  CHECK(est.possibly_infinite);
}

TEST_CASE("frequency projection converges to M E V")
{
  testing::Gen g(23);
  const LtiSystem sys = g.SparseStable(40, 0.1);
  const Matrix V = g.Orthonormal(40, 3);
  const Matrix E(sys.E), A(sys.A);
  const Matrix exact = SolveLyapDirect(E, A, Matrix::Identity(40, 40)) * E * V;
  double previous = 1e300;
  for (int k : {8, 32, 128})
  {
    const Matrix W = FreqProjection(sys.E, sys.A, V, FrequencyRule::GaussLegendre(k));
    const double err = (W - exact).norm() / exact.norm();
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-4);
}
