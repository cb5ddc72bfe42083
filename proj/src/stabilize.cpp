// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include "sgmor/stabilize.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "sgmor/linalg.hpp"
#include "sgmor/lyapunov.hpp"

namespace sgmor
{

namespace
{

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SparseMatrix PatternOf(const SparseMatrix &E, const SparseMatrix &A)
{
  SparseMatrix P = SparseMatrix(E.cwiseAbs()) + SparseMatrix(A.cwiseAbs());
  P.prune(0.0);
  return P;
}

}  // namespace

std::string ToString(Technique technique)
{
  switch (technique)
  {
    case Technique::none:
      return "none";
    case Technique::i:
      return "i";
    case Technique::ii:
      return "ii";
    case Technique::iii:
      return "iii";
  }
  return "none";
}

Technique ParseTechnique(const std::string &name)
{
  if (name == "none")
  {
    return Technique::none;
  }
  if (name == "i")
  {
    return Technique::i;
  }
  if (name == "ii")
  {
    return Technique::ii;
  }
  if (name == "iii")
  {
    return Technique::iii;
  }
  throw std::invalid_argument("unknown technique '" + name + "' (expected none, i, ii, iii)");
}

StabilizationOutcome TechniqueI(const GalerkinSystem &gal, const Matrix &V,
                                const FrequencyRule &rule, const std::optional<SparseMatrix> &F)
{
  const auto start = Clock::now();
  RequireNonsingularMass(gal);
  StabilizationOutcome out;
  out.technique = Technique::i;
  if (F)
  {
    out.W = FreqProjection(gal.system.E, gal.system.A, *F, V, rule);
  }
  else
  {
    out.W = FreqProjection(gal.system.E, gal.system.A, V, rule);
  }
  out.diagnostics.frequency_nodes = rule.NumNodes();
  out.diagnostics.seconds = SecondsSince(start);
  return out;
}

StabilizationOutcome TechniqueIDirect(const GalerkinSystem &gal, const Matrix &V,
                                      const Matrix &F)
{
  const auto start = Clock::now();
  if (V.rows() != gal.Order())
  {
    throw std::invalid_argument("V must have " + std::to_string(gal.Order()) + " rows");
  }
  const Matrix E(gal.system.E);
  const Matrix M = SolveLyapDirect(E, Matrix(gal.system.A), F);
  StabilizationOutcome out;
  out.technique = Technique::i;
  out.W = M * (E * V);
  out.diagnostics.notes.push_back("direct Lyapunov solve");
  out.diagnostics.seconds = SecondsSince(start);
  return out;
}

StabilizationOutcome TechniqueII(const AffineParamSystem &aps, const PolynomialChaosBasis &basis,
                                 const QuadratureRule &rule, const Matrix &F)
{
  const auto start = Clock::now();
  auto node_fn = [&](std::span<const double> mu) -> NodeMatrices
  {
    const LtiSystem sys = aps.Evaluate(mu);
    const Matrix E(sys.E), A(sys.A), B(sys.B);
    const Matrix M = SolveLyapDirect(E, A, F);
    const Matrix EtM = E.transpose() * M;
    NodeMatrices node{EtM * A, EtM * B, EtM * E};
    node.E = 0.5 * (node.E + node.E.transpose()).eval();
    return node;
  };
  const SparseMatrix outputs = Assemble(aps, basis).system.C;

  StabilizationOutcome out;
  out.technique = Technique::ii;
  out.transformed = AssembleViaQuadrature(node_fn, basis, rule, outputs);
  auto &diag = out.diagnostics;
  diag.quadrature_nodes = rule.Size();

  const Matrix Et(out.transformed->system.E);
  const Matrix At(out.transformed->system.A);
  const Matrix S = At + At.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig_e(0.5 * (Et + Et.transpose()),
                                              Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> eig_s(S, Eigen::EigenvaluesOnly);
  const Vector ev_e = eig_e.eigenvalues(), ev_s = eig_s.eigenvalues();
  diag.e_min_eigenvalue = ev_e(0);
  diag.sym_a_max_eigenvalue = ev_s(ev_s.size() - 1);
  const double tol_e = 1e-10 * ev_e.cwiseAbs().maxCoeff();
  const double tol_s = 1e-10 * ev_s.cwiseAbs().maxCoeff();
  diag.e_positive_semidefinite = ev_e(0) >= -tol_e;
  diag.sym_a_negative_semidefinite = ev_s(ev_s.size() - 1) <= tol_s;
  if (!(ev_e(0) > tol_e))
  {
    diag.notes.push_back("transformed mass matrix is only semidefinite");
  }
  if (!(ev_s(ev_s.size() - 1) < -tol_s))
  {
    diag.notes.push_back("symmetric part of transformed system matrix is only semidefinite");
  }
  diag.seconds = SecondsSince(start);
  return out;
}

double DissipativityMargin(const GalerkinSystem &gal, const Matrix &Mstar)
{
  const Index n = gal.state_size;
  if (Mstar.rows() != n || Mstar.cols() != n)
  {
    throw std::invalid_argument("reference Lyapunov matrix must be n x n");
  }
  const SparseMatrix Mhat = linalg::BlockDiagonal(Mstar, gal.basis_size);
  const SparseMatrix Et = gal.system.E.transpose();
  const SparseMatrix X = Et * (Mhat * gal.system.A);
  const SparseMatrix S = X + SparseMatrix(X.transpose());
  return linalg::LargestSymmetricEigenvalue(S);
}

StabilizationOutcome TechniqueIII(const GalerkinSystem &gal, const AffineParamSystem &aps,
                                  std::span<const double> mu_ref, const Matrix &F,
                                  const Matrix &V)
{
  const auto start = Clock::now();
  if (gal.state_size != aps.Order())
  {
    throw std::invalid_argument("Galerkin system and parameter family have different n");
  }
  RequireNonsingularMass(gal);
  const Matrix Mstar = SolveLyapParam(aps, mu_ref, F);
  StabilizationOutcome out;
  out.technique = Technique::iii;
  if (V.cols() > 0)
  {
    if (V.rows() != gal.Order())
    {
      throw std::invalid_argument("V must have " + std::to_string(gal.Order()) + " rows");
    }
    out.W = linalg::BlockDiagonalApply(Mstar, gal.system.E * V);
  }
  out.diagnostics.margin = DissipativityMargin(gal, Mstar);
  out.diagnostics.seconds = SecondsSince(start);
  return out;
}

std::vector<ThetaMarginPoint> ThetaMarginSweep(const AffineParamSystem &aps, int degree,
                                               std::span<const double> thetas, const Matrix &F)
{
  const Vector mean = aps.Mean();
  std::vector<ThetaMarginPoint> out;
  for (double theta : thetas)
  {
    std::vector<Distribution> dists;
    for (const auto &d : aps.Distributions())
    {
      dists.push_back(d.Contracted(theta));
    }
    const AffineParamSystem family = aps.WithDistributions(dists);
    const PolynomialChaosBasis basis(dists, degree);
    const GalerkinSystem gal = Assemble(family, basis);
    const Matrix Mstar =
        SolveLyapParam(family, std::span<const double>(mean.data(), mean.size()), F);
    out.push_back({theta, DissipativityMargin(gal, Mstar)});
  }
  return out;
}

RegularizationParams RegularizationParams::FromBeta(double beta)
{
  if (!(beta > 0.0) || !std::isfinite(beta))
  {
    throw std::invalid_argument("regularization parameter beta must be positive");
  }
  return {beta, beta * beta};
}

Pencil Regularize(const SparseMatrix &E, const SparseMatrix &A, double beta)
{
  const auto p = RegularizationParams::FromBeta(beta);
  if (E.rows() != A.rows() || E.cols() != A.cols())
  {
    throw std::invalid_argument("regularization needs E and A of equal size");
  }
  return {E - p.alpha * A, A + p.beta * E};
}

LtiSystem Regularize(const LtiSystem &sys, double beta)
{
  sys.Validate();
  Pencil p = Regularize(sys.E, sys.A, beta);
  return {std::move(p.E), std::move(p.A), sys.B, sys.C};
}

AffineParamSystem Regularize(const AffineParamSystem &aps, double beta)
{
  // The map is linear, so it applies term by term.
  std::vector<LtiSystem> terms;
  for (const auto &term : aps.Terms())
  {
    terms.push_back(Regularize(term, beta));
  }
  return AffineParamSystem(std::move(terms), aps.Distributions());
}

GalerkinSystem Regularize(const GalerkinSystem &gal, double beta)
{
  GalerkinSystem out = gal;
  out.system = Regularize(gal.system, beta);
  return out;
}

bool SamePencilPattern(const SparseMatrix &E1, const SparseMatrix &A1, const SparseMatrix &E2,
                       const SparseMatrix &A2)
{
  SparseMatrix P1 = PatternOf(E1, A1), P2 = PatternOf(E2, A2);
  if (P1.rows() != P2.rows() || P1.cols() != P2.cols() || P1.nonZeros() != P2.nonZeros())
  {
    return false;
  }
  P1.makeCompressed();
  P2.makeCompressed();
  for (Index k = 0; k <= P1.outerSize(); k++)
  {
    if (P1.outerIndexPtr()[k] != P2.outerIndexPtr()[k])
    {
      return false;
    }
  }
  for (Index k = 0; k < P1.nonZeros(); k++)
  {
    if (P1.innerIndexPtr()[k] != P2.innerIndexPtr()[k])
    {
      return false;
    }
  }
  return true;
}

CommutationReport CheckRegularizationCommutes(const AffineParamSystem &aps,
                                              const PolynomialChaosBasis &basis,
                                              double beta_first, double beta_second,
                                              double tolerance)
{
  const GalerkinSystem first = Assemble(Regularize(aps, beta_first), basis);
  const GalerkinSystem second = Regularize(Assemble(aps, basis), beta_second);
  CommutationReport report;
  report.tolerance = tolerance;
  report.max_abs_diff_E = linalg::MaxAbsDifference(first.system.E, second.system.E);
  report.max_abs_diff_A = linalg::MaxAbsDifference(first.system.A, second.system.A);
  report.equal = report.max_abs_diff_E < tolerance && report.max_abs_diff_A < tolerance;
  return report;
}

}  // namespace sgmor
