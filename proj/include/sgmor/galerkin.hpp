// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_GALERKIN_HPP
#define SGMOR_GALERKIN_HPP

#include <functional>
#include <span>
#include <string>

#include "sgmor/pce.hpp"
#include "sgmor/systems.hpp"
#include "sgmor/types.hpp"

namespace sgmor
{

enum class GalerkinProvenance
{
  exact_affine,
  quadrature
};

//
// Stochastic Galerkin system of dimension m*n: blocks (i, j) of E_hat and A_hat are
// E[Phi_i Phi_j E(mu)] and E[Phi_i Phi_j A(mu)]; block i of B_hat is E[Phi_i B(mu)] and
// C_hat = E[S(mu) (x) C(mu)] has m * n_out rows (the PC coefficients of the outputs).
//
struct GalerkinSystem
{
  LtiSystem system;
  Index basis_size = 0;   // m
  Index state_size = 0;   // n
  GalerkinProvenance provenance = GalerkinProvenance::exact_affine;
  Index quadrature_nodes = 0;

  Index Order() const { return system.Order(); }
  std::string ProvenanceTag() const;
};

// Exact assembly for affine families: A_hat = sum_{l=0..q} G_l (x) A_l with the moment
// matrices of the basis (G_0 = I); likewise E_hat, C_hat, and
// B_hat = e_1 (x) B_0 + sum_l (G_l e_1) (x) B_l.
GalerkinSystem Assemble(const AffineParamSystem &aps, const PolynomialChaosBasis &basis);

// Transformed node matrices (A', B', E') at one parameter point.
struct NodeMatrices
{
  Matrix A, B, E;
};
using NodeMatrixFunction = std::function<NodeMatrices(std::span<const double> mu)>;

// Quadrature assembly A_tilde = sum_k gamma_k S(mu_k) (x) A'(mu_k) (likewise E_tilde) and
// B_tilde = sum_k gamma_k s(mu_k) (x) B'(mu_k). Matrices are dense. The output matrix is
// taken from `outputs`, which must be m * n_out by m * n. Rejects rules with non-positive
// weights. Failures of matrix_fn are rethrown with the node index.
GalerkinSystem AssembleViaQuadrature(const NodeMatrixFunction &matrix_fn,
                                     const PolynomialChaosBasis &basis,
                                     const QuadratureRule &rule, const SparseMatrix &outputs);

// Mean and variance of a quantity with PC coefficients w (ordered as the basis).
struct QoiStatistics
{
  double mean;
  double variance;
};
QoiStatistics ComputeQoiStatistics(const PolynomialChaosBasis &basis, const Vector &coefficients);

// sum_i w_i Phi_i(mu).
double ExpandQoi(const PolynomialChaosBasis &basis, const Vector &coefficients,
                 std::span<const double> mu);

// Throws NumericalError if E_hat is numerically singular (the stochastic Galerkin mass
// matrix may lose invertibility even when every E(mu) is non-singular).
void RequireNonsingularMass(const GalerkinSystem &gal);

}  // namespace sgmor

#endif  // SGMOR_GALERKIN_HPP
