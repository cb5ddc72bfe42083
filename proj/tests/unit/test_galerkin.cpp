// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "sgmor/bench.hpp"
#include "sgmor/galerkin.hpp"
#include "sgmor/linalg.hpp"

using namespace sgmor;

namespace
{

NodeMatrices NodeFromAffine(const AffineParamSystem &aps, std::span<const double> mu)
{
  const LtiSystem s = aps.Evaluate(mu);
  return {Matrix(s.A), Matrix(s.B), Matrix(s.E)};
}

}  // namespace

TEST_CASE("scalar family: Galerkin matrix against hand computation")
{
  // x' = -(a0 + a1 mu) x + u, y = x, mu ~ U(-1, 1), degree 2.
  const double a0 = 2.0, a1 = 0.5;
  std::vector<LtiSystem> terms(2);
  terms[0] = {Matrix::Identity(1, 1).sparseView(), Matrix::Constant(1, 1, -a0).sparseView(),
              Matrix::Ones(1, 1).sparseView(), Matrix::Ones(1, 1).sparseView()};
  terms[1] = {SparseMatrix(1, 1), Matrix::Constant(1, 1, -a1).sparseView(), SparseMatrix(1, 1),
              SparseMatrix(1, 1)};
  const AffineParamSystem aps(terms, {Distribution::Uniform(-1.0, 1.0)});
  const PolynomialChaosBasis basis(aps.Distributions(), 2);
  const GalerkinSystem gal = Assemble(aps, basis);
  REQUIRE(gal.Order() == 3);
  const double c01 = 1.0 / std::sqrt(3.0), c12 = 2.0 / std::sqrt(15.0);
  Matrix expected(3, 3);
  expected << -a0, -a1 * c01, 0, -a1 * c01, -a0, -a1 * c12, 0, -a1 * c12, -a0;
  CHECK((Matrix(gal.system.A) - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(Matrix(gal.system.E).isIdentity());
  CHECK(Matrix(gal.system.B) == (Matrix(3, 1) << 1, 0, 0).finished());
  CHECK(gal.system.NumOutputs() == 3);
  CHECK(gal.ProvenanceTag() == "exact-affine");
}

TEST_CASE("exact affine assembly equals tensor quadrature assembly")
{
  testing::Gen g(11);
  for (int trial = 0; trial < 5; trial++)
  {
    const Index n = g.Int(2, 5);
    const int q = g.Int(1, 3);
    const AffineParamSystem aps = testing::DissipativeFamily(g, n, q);
    const PolynomialChaosBasis basis(aps.Distributions(), 2);
    const GalerkinSystem exact = Assemble(aps, basis);
    const QuadratureRule rule = TensorRule(aps.Distributions(), 4);
    SparseMatrix outputs = exact.system.C;
    const GalerkinSystem quad = AssembleViaQuadrature(
        [&](std::span<const double> mu) { return NodeFromAffine(aps, mu); }, basis, rule,
        outputs);
    CHECK(quad.ProvenanceTag() == "quadrature(" + std::to_string(rule.Size()) + " nodes)");
    CHECK(linalg::MaxAbsDifference(exact.system.A, quad.system.A) < 1e-12);
    CHECK(linalg::MaxAbsDifference(exact.system.E, quad.system.E) < 1e-12);
    CHECK(linalg::MaxAbsDifference(exact.system.B, quad.system.B) < 1e-12);
  }
}

TEST_CASE("Galerkin output matrix stacks I (x) C")
{
  const AffineParamSystem aps = BuildMsd();
  const PolynomialChaosBasis basis(aps.Distributions(), 1);
  const GalerkinSystem gal = Assemble(aps, basis);
  CHECK(gal.Order() == 18 * 10);
  CHECK(gal.system.NumOutputs() == 18);
  const Matrix C = Matrix(gal.system.C);
  for (Index i = 0; i < 18; i++)
  {
    CHECK(C.block(i, i * 10, 1, 10) == Matrix(aps.Term(0).C));
  }
}

TEST_CASE("mismatched inputs are rejected")
{
  const AffineParamSystem aps = BuildMsd();
  const PolynomialChaosBasis wrong({Distribution::Uniform(0, 1)}, 1);
  CHECK_THROWS_AS(Assemble(aps, wrong), std::invalid_argument);
  QuadratureRule bad = TensorRule(aps.Distributions(), 1);
  bad.weights(0) = -1.0;
  const PolynomialChaosBasis basis(aps.Distributions(), 1);
  CHECK_THROWS_AS(
      AssembleViaQuadrature([&](std::span<const double> mu) { return NodeFromAffine(aps, mu); },
                            basis, bad, Assemble(aps, basis).system.C),
      std::invalid_argument);
}

TEST_CASE("QoI statistics of an orthonormal expansion")
{
  const PolynomialChaosBasis basis({Distribution::Uniform(0, 2), Distribution::Gaussian(1, 1)}, 2);
  Vector c = Vector::Zero(basis.Size());
  c(0) = 3.0;
  c(1) = 0.5;
  c(4) = -2.0;
  const QoiStatistics s = ComputeQoiStatistics(basis, c);
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.variance == doctest::Approx(0.25 + 4.0));
  // The expansion evaluated by Monte Carlo reproduces the mean.
  const QuadratureRule rule = TensorRule(basis.Distributions(), 6);
  double mean = 0.0;
  for (Index k = 0; k < rule.Size(); k++)
  {
    const Vector mu = rule.nodes.col(k);
    mean += rule.weights(k) * ExpandQoi(basis, c, std::span<const double>(mu.data(), mu.size()));
  }
  CHECK(mean == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("singular Galerkin mass matrix is detected")
{
  const AffineParamSystem aps = BuildBandpass();
  const PolynomialChaosBasis basis(aps.Distributions(), 1);
  const GalerkinSystem gal = Assemble(aps, basis);
  CHECK_THROWS_AS(RequireNonsingularMass(gal), NumericalError);
  const GalerkinSystem msd = Assemble(BuildMsd(), PolynomialChaosBasis(BuildMsd().Distributions(), 1));
  CHECK_NOTHROW(RequireNonsingularMass(msd));
}

TEST_CASE("Galerkin nnz grows linearly in m for MSD")
{
  // Each G_l has at most three nonzeros per row (three-term recurrence).
  const AffineParamSystem aps = BuildMsd();
  Index bound_a = aps.Term(0).A.nonZeros(), bound_e = aps.Term(0).E.nonZeros();
  for (int l = 1; l <= aps.NumParams(); l++)
  {
    bound_a += 3 * aps.Term(l).A.nonZeros();
    bound_e += 3 * aps.Term(l).E.nonZeros();
  }
  for (int d = 1; d <= 3; d++)
  {
    const PolynomialChaosBasis basis(aps.Distributions(), d);
    const GalerkinSystem gal = Assemble(aps, basis);
    CHECK(gal.system.A.nonZeros() <= bound_a * basis.Size());
    CHECK(gal.system.E.nonZeros() <= bound_e * basis.Size());
    CHECK(gal.system.A.nonZeros() >= aps.Term(0).A.nonZeros() * basis.Size());
  }
}
