// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_LYAPUNOV_HPP
#define SGMOR_LYAPUNOV_HPP

#include <span>

#include "sgmor/frequency.hpp"
#include "sgmor/systems.hpp"
#include "sgmor/types.hpp"

namespace sgmor
{

// Solves A^T M E + E^T M A + F = 0 for symmetric M.
//
// Generalized Bartels-Stewart on the real QZ form of (A, E), followed by one step of
// iterative refinement. Throws NumericalError if E is singular or the
// pencil has an eigenvalue with non-negative real part.
Matrix SolveLyapDirect(const Matrix &E, const Matrix &A, const Matrix &F);

// Lyapunov solution of the system evaluated at mu, for a constant F.
Matrix SolveLyapParam(const AffineParamSystem &aps, std::span<const double> mu, const Matrix &F);

// ||A^T M E + E^T M A + F||_F / ||F||_F.
double LyapResidual(const Matrix &E, const Matrix &A, const Matrix &F, const Matrix &M);

// 1 / (||A^T|| ||E|| + ||A|| ||E^T||) in the spectral norm: symmetric perturbations of
// the exact solution below this size keep A^T M E + E^T M A negative definite when F = I.
double AccuracyBound(const Matrix &E, const Matrix &A);

// W ~= M E V from the integral M = (1/2pi) int (i w E - A)^{-H} F (i w E - A)^{-1} dw,
// one sparse LU per frequency node. M is never formed.
Matrix FreqProjection(const SparseMatrix &E, const SparseMatrix &A, const SparseMatrix &F,
                      const Matrix &V, const FrequencyRule &rule);
// F = I.
Matrix FreqProjection(const SparseMatrix &E, const SparseMatrix &A, const Matrix &V,
                      const FrequencyRule &rule);

}  // namespace sgmor

#endif  // SGMOR_LYAPUNOV_HPP
