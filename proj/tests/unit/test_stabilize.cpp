// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "sgmor/bench.hpp"
#include "sgmor/galerkin.hpp"
#include "sgmor/lyapunov.hpp"
#include "sgmor/mor.hpp"
#include "sgmor/stabilize.hpp"

using namespace sgmor;

TEST_CASE("technique names round-trip")
{
  for (Technique t : {Technique::none, Technique::i, Technique::ii, Technique::iii})
  {
    CHECK(ParseTechnique(ToString(t)) == t);
  }
  CHECK_THROWS_AS(ParseTechnique("iv"), std::invalid_argument);
}

TEST_CASE("regularization formula and pattern")
{
  testing::Gen g(2);
  const Matrix E = g.Gaussian(4, 4), A = g.Gaussian(4, 4);
  const double beta = 1e-3;
  const Pencil p = Regularize(E.sparseView(), A.sparseView(), beta);
  CHECK((Matrix(p.E) - (E - beta * beta * A)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((Matrix(p.A) - (A + beta * E)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(RegularizationParams::FromBeta(0.0), std::invalid_argument);
  CHECK(RegularizationParams::FromBeta(1e-5).alpha == doctest::Approx(1e-10));
}

TEST_CASE("regularization commutes with Galerkin projection on the band-pass family")
{
  const AffineParamSystem aps = BuildBandpass();
  const PolynomialChaosBasis basis(aps.Distributions(), 1);
  const CommutationReport rep = CheckRegularizationCommutes(aps, basis, 1e-5, 1e-5);
  CHECK(rep.equal);
  CHECK(rep.max_abs_diff_E < 1e-12);
  CHECK(rep.max_abs_diff_A < 1e-12);
  // Different parameters do not commute.
  CHECK_FALSE(CheckRegularizationCommutes(aps, basis, 1e-5, 2e-5).equal);
  const GalerkinSystem dae = Assemble(aps, basis);
  const GalerkinSystem reg = Regularize(dae, 1e-5);
  CHECK(SamePencilPattern(dae.system.E, dae.system.A, reg.system.E, reg.system.A));
}

TEST_CASE("regularized band-pass pencil is regular with finite stable spectrum")
{
  const AffineParamSystem aps = BuildBandpass();
  const Vector mean = aps.Mean();
  const LtiSystem dae = aps.Evaluate(std::span<const double>(mean.data(), mean.size()));
  const PencilSpectrum sd = ComputePencilSpectrum(dae.E, dae.A);
  CHECK(sd.has_infinite);
  CHECK(sd.abscissa < 0.0);
  const LtiSystem reg = Regularize(dae, 1e-5);
  CHECK(Eigen::FullPivLU<Matrix>(Matrix(reg.E)).isInvertible());
  CHECK(IsAsymptoticallyStable(reg.E, reg.A));
}

TEST_CASE("technique i makes every ROM of a non-dissipative ODE stable")
{
  testing::Gen g(8);
  for (int trial = 0; trial < 5; trial++)
  {
    const Index n = 30;
    const auto [E, A] = g.StablePair(n);
    GalerkinSystem gal;
    gal.system = {E.sparseView(), A.sparseView(), g.Gaussian(n, 1).sparseView(),
                  g.Gaussian(1, n).sparseView()};
    gal.basis_size = 1;
    gal.state_size = n;
    const ArnoldiResult kr = Arnoldi(gal.system.E, gal.system.A, gal.system.B, 0.5, 12);
    const StabilizationOutcome direct =
        TechniqueIDirect(gal, kr.V, Matrix::Identity(n, n));
    for (Index r = 1; r <= kr.rank; r++)
    {
      const Matrix V = kr.V.leftCols(r), W = direct.W->leftCols(r);
      CHECK(testing::Abscissa(W.transpose() * E * V, W.transpose() * A * V) < 0.0);
    }
    const StabilizationOutcome freq = TechniqueI(gal, kr.V, FrequencyRule::GaussLegendre(128));
    CHECK((*freq.W - *direct.W).norm() < 1e-4 * direct.W->norm());
  }
}

TEST_CASE("technique ii diagnostics: transformed quadrature system is dissipative")
{
  testing::Gen g(31);
  const AffineParamSystem aps = testing::DissipativeFamily(g, 4, 2);
  const PolynomialChaosBasis basis(aps.Distributions(), 2);
  const QuadratureRule rule = TensorRule(aps.Distributions(), 3);
  const StabilizationOutcome out = TechniqueII(aps, basis, rule, Matrix::Identity(4, 4));
  REQUIRE(out.transformed);
  CHECK(out.diagnostics.e_positive_semidefinite);
  CHECK(out.diagnostics.sym_a_negative_semidefinite);
  CHECK(out.diagnostics.quadrature_nodes == rule.Size());
  CHECK(out.transformed->ProvenanceTag() == "quadrature(9 nodes)");
  CHECK(CheckDissipative(out.transformed->system.E, out.transformed->system.A).Dissipative());
}

TEST_CASE("technique iii margin is -lambda_min(F) at theta = 0")
{
  testing::Gen g(4);
  const AffineParamSystem aps = BuildMsd();
  const Matrix F = g.Spd(aps.Order());
  const double thetas[] = {0.0, 0.5, 1.0};
  const auto curve = ThetaMarginSweep(aps, 1, thetas, F);
  REQUIRE(curve.size() == 3);
  CHECK(std::abs(curve[0].margin + testing::MinEig(F)) < 1e-8);
  CHECK(curve[1].margin > curve[0].margin);
}

TEST_CASE("technique iii with an empty V reports the margin only")
{
  const AffineParamSystem aps = BuildMsd();
  const PolynomialChaosBasis basis(aps.Distributions(), 1);
  const GalerkinSystem gal = Assemble(aps, basis);
  const Vector mean = aps.Mean();
  const StabilizationOutcome out =
      TechniqueIII(gal, aps, std::span<const double>(mean.data(), mean.size()),
                   Matrix::Identity(10, 10), Matrix(gal.Order(), 0));
  REQUIRE(out.diagnostics.margin);
  CHECK_FALSE(out.W.has_value());
}
