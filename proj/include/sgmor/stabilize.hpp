// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_STABILIZE_HPP
#define SGMOR_STABILIZE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgmor/frequency.hpp"
#include "sgmor/galerkin.hpp"
#include "sgmor/pce.hpp"
#include "sgmor/systems.hpp"
#include "sgmor/types.hpp"

namespace sgmor
{

enum class Technique
{
  none,
  i,     // W = M E V for the Galerkin system, by frequency integrals
  ii,    // transform every node system, then assemble by quadrature
  iii    // W = (I (x) M*) E V with M* from a reference parameter
};

std::string ToString(Technique technique);
// Accepts "none", "i", "ii", "iii". Throws std::invalid_argument otherwise.
Technique ParseTechnique(const std::string &name);

struct StabilizationDiagnostics
{
  // lambda_max of X + X^T with X = E^T (I (x) M*) A (technique iii).
  std::optional<double> margin;
  int frequency_nodes = 0;
  Index quadrature_nodes = 0;
  // Technique ii: extreme eigenvalues of E_tilde and of A_tilde + A_tilde^T.
  std::optional<double> e_min_eigenvalue;
  std::optional<double> sym_a_max_eigenvalue;
  bool e_positive_semidefinite = true;
  bool sym_a_negative_semidefinite = true;
  double seconds = 0.0;
  std::vector<std::string> notes;
};

struct StabilizationOutcome
{
  Technique technique = Technique::none;
  std::optional<Matrix> W;
  std::optional<GalerkinSystem> transformed;
  StabilizationDiagnostics diagnostics;
};

// W = FreqProjection(E_hat, A_hat, F, V). F defaults to the identity.
StabilizationOutcome TechniqueI(const GalerkinSystem &gal, const Matrix &V,
                                const FrequencyRule &rule,
                                const std::optional<SparseMatrix> &F = std::nullopt);

// W = M E_hat V with M from the direct Lyapunov solver on the full Galerkin system (dense,
// O((mn)^3)). Robust for regularized DAEs, whose fast modes defeat frequency quadrature.
StabilizationOutcome TechniqueIDirect(const GalerkinSystem &gal, const Matrix &V,
                                      const Matrix &F);

// Per node: M from the Lyapunov equation, then A' = E^T M A, B' = E^T M B, E' = E^T M E;
// the transformed Galerkin system is assembled by quadrature (dense). The output matrix
// is the exact Galerkin output matrix of aps.
StabilizationOutcome TechniqueII(const AffineParamSystem &aps, const PolynomialChaosBasis &basis,
                                 const QuadratureRule &rule, const Matrix &F);

// M* from the Lyapunov equation at mu_ref; W = (I (x) M*) E_hat V block-wise, plus the
// dissipativity margin. Pass V with zero columns to compute the margin only.
StabilizationOutcome TechniqueIII(const GalerkinSystem &gal, const AffineParamSystem &aps,
                                  std::span<const double> mu_ref, const Matrix &F,
                                  const Matrix &V);

// lambda_max(X + X^T), X = E_hat^T (I (x) M*) A_hat.
double DissipativityMargin(const GalerkinSystem &gal, const Matrix &Mstar);

// Margin of the contracted family mu* + theta (mu - mu*) around the mean, at the given
// degree and F.
struct ThetaMarginPoint
{
  double theta;
  double margin;
};
std::vector<ThetaMarginPoint> ThetaMarginSweep(const AffineParamSystem &aps, int degree,
                                               std::span<const double> thetas, const Matrix &F);

struct RegularizationParams
{
  double beta;
  double alpha;   // beta^2

  // Throws std::invalid_argument unless beta > 0.
  static RegularizationParams FromBeta(double beta);
};

inline constexpr double kDefaultBeta = 1e-5;

struct Pencil
{
  SparseMatrix E, A;
};

// E_reg = E - alpha A, A_reg = A + beta E with alpha = beta^2.
Pencil Regularize(const SparseMatrix &E, const SparseMatrix &A, double beta);
LtiSystem Regularize(const LtiSystem &sys, double beta);
AffineParamSystem Regularize(const AffineParamSystem &aps, double beta);
GalerkinSystem Regularize(const GalerkinSystem &gal, double beta);

// True if s E1 - A1 and s E2 - A2 have the same sparsity pattern (ignoring cancellation).
bool SamePencilPattern(const SparseMatrix &E1, const SparseMatrix &A1, const SparseMatrix &E2,
                       const SparseMatrix &A2);

struct CommutationReport
{
  double max_abs_diff_E = 0.0;
  double max_abs_diff_A = 0.0;
  double tolerance = 1e-12;
  bool equal = false;
};

// Compares Assemble(Regularize(aps, beta_first)) with Regularize(Assemble(aps), beta_second).
CommutationReport CheckRegularizationCommutes(const AffineParamSystem &aps,
                                              const PolynomialChaosBasis &basis,
                                              double beta_first, double beta_second,
                                              double tolerance = 1e-12);

}  // namespace sgmor

#endif  // SGMOR_STABILIZE_HPP
