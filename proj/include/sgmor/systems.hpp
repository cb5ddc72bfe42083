// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_SYSTEMS_HPP
#define SGMOR_SYSTEMS_HPP

#include <span>
#include <string>
#include <vector>

#include "sgmor/pce.hpp"
#include "sgmor/types.hpp"

namespace sgmor
{

//
// Linear time-invariant descriptor system E x' = A x + B u, y = C x.
//
struct LtiSystem
{
  SparseMatrix E, A, B, C;

  Index Order() const { return A.rows(); }
  Index NumInputs() const { return B.cols(); }
  Index NumOutputs() const { return C.rows(); }

  // Throws std::invalid_argument on inconsistent dimensions.
  void Validate() const;
};

// Dense counterpart, used for reduced models.
struct DenseLtiSystem
{
  Matrix E, A, B, C;

  Index Order() const { return A.rows(); }
  Index NumInputs() const { return B.cols(); }
  Index NumOutputs() const { return C.rows(); }

  void Validate() const;
};

DenseLtiSystem ToDense(const LtiSystem &sys);
LtiSystem ToSparse(const DenseLtiSystem &sys);

//
// Parameter-affine family E(mu) = E_0 + sum_l mu_l E_l (likewise A, B, C) with independent
// random parameters mu_l.
//
class AffineParamSystem
{
public:
  // terms[0] holds the constant parts, terms[l] the coefficients of mu_l.
  AffineParamSystem(std::vector<LtiSystem> terms, std::vector<Distribution> dists);

  int NumParams() const { return static_cast<int>(dists.size()); }
  Index Order() const { return terms.front().Order(); }
  Index NumInputs() const { return terms.front().NumInputs(); }
  Index NumOutputs() const { return terms.front().NumOutputs(); }

  const LtiSystem &Term(int l) const { return terms.at(l); }
  const std::vector<LtiSystem> &Terms() const { return terms; }
  const std::vector<Distribution> &Distributions() const { return dists; }

  // Parameter means, the usual reference point.
  Vector Mean() const;

  LtiSystem Evaluate(std::span<const double> mu) const;

  // Same matrices, new distributions (e.g. the contracted family around the mean).
  AffineParamSystem WithDistributions(std::vector<Distribution> new_dists) const;

private:
  std::vector<LtiSystem> terms;
  std::vector<Distribution> dists;
};

// Finite generalized eigenvalues of the pencil (E, A).
struct PencilSpectrum
{
  std::vector<Complex> finite;
  // max Re(lambda) over the finite eigenvalues, -inf if there are none.
  double abscissa;
  bool has_infinite;
};

// QZ-based spectrum. Eigenvalues with |beta| <= n eps ||E|| count as infinite.
// A pair with both alpha and beta tiny is checked with sE - A at two fixed
// shifts; throws SingularPencilError only if both are singular.
PencilSpectrum ComputePencilSpectrum(const Matrix &E, const Matrix &A);
PencilSpectrum ComputePencilSpectrum(const SparseMatrix &E, const SparseMatrix &A);

// alpha(E, A) < -tol. Throws if the pencil is singular or has no finite eigenvalues.
bool IsAsymptoticallyStable(const Matrix &E, const Matrix &A, double tol = 0.0);
bool IsAsymptoticallyStable(const SparseMatrix &E, const SparseMatrix &A, double tol = 0.0);

struct DissipativityReport
{
  bool e_symmetric = false;
  bool e_positive_definite = false;
  bool sym_a_negative_definite = false;
  // Smallest eigenvalue of (E + E^T)/2 and largest eigenvalue of A + A^T.
  double e_min_eigenvalue = 0.0;
  double sym_a_max_eigenvalue = 0.0;

  bool Dissipative() const
  {
    return e_symmetric && e_positive_definite && sym_a_negative_definite;
  }
  explicit operator bool() const { return Dissipative(); }
  std::string Describe() const;
};

// E symmetric positive definite and A + A^T negative definite. Definiteness is decided
// against a margin of tol * ||M||_2 (tol defaults to 1e-10), so semi-definite boundary
// cases are rejected.
DissipativityReport CheckDissipative(const Matrix &E, const Matrix &A, double tol = 1e-10);
DissipativityReport CheckDissipative(const SparseMatrix &E, const SparseMatrix &A,
                                     double tol = 1e-10);

// H(s) = C (sE - A)^{-1} B. Throws NumericalError naming s if sE - A is singular.
ComplexMatrix EvaluateTransfer(const LtiSystem &sys, Complex s);
ComplexMatrix EvaluateTransfer(const DenseLtiSystem &sys, Complex s);

// Bound on sup_t ||y(t) - y_r(t)||_inf for zero initial values: the absolute H2 error
// ||H - H_r|| = relative error * ||H||, times the L2 norm of the input signal.
double OutputErrorBound(double relative_h2_error, double fom_h2_norm, double input_l2_norm);

}  // namespace sgmor

#endif  // SGMOR_SYSTEMS_HPP
