// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_LINALG_HPP
#define SGMOR_LINALG_HPP

#include <Eigen/SparseLU>

#include "sgmor/types.hpp"

namespace sgmor::linalg
{

inline constexpr Index kDenseEigenThreshold = 2000;

// Largest algebraic eigenvalue of a symmetric matrix. Dense eigensolver below
// dense_threshold, Lanczos with full reorthogonalization above it.
double LargestSymmetricEigenvalue(const SparseMatrix &S,
                                  Index dense_threshold = kDenseEigenThreshold);
double LargestSymmetricEigenvalue(const Matrix &S);

// Lanczos iteration only; exposed for testing against the dense path.
double LanczosLargestEigenvalue(const SparseMatrix &S, int max_steps = 300,
                                double tol = 1e-12);

// Largest singular value.
double SpectralNorm(const Matrix &M);

// Kronecker product I_m (x) X applied to the rows of Y in blocks of X.cols().
Matrix BlockDiagonalApply(const Matrix &X, const Matrix &Y);

// I_m (x) X as a sparse matrix.
SparseMatrix BlockDiagonal(const Matrix &X, Index m);

// Largest absolute entry of the difference, over the union of sparsity patterns.
double MaxAbsDifference(const SparseMatrix &X, const SparseMatrix &Y);

// Sparse LU of s E - A for a sequence of complex shifts. The sparsity pattern does not
// depend on s, so the symbolic analysis is done once.
class ShiftedSolver
{
public:
  ShiftedSolver(const SparseMatrix &E, const SparseMatrix &A);

  // Throws NumericalError naming s when s E - A is singular.
  void Factorize(Complex s);
  Complex Shift() const { return shift; }

  ComplexMatrix Solve(const ComplexMatrix &rhs) const;
  // (s E - A)^{-H} rhs.
  ComplexMatrix SolveAdjoint(const ComplexMatrix &rhs) const;

private:
  ComplexSparseMatrix E, A;
  mutable Eigen::SparseLU<ComplexSparseMatrix> lu;
  Complex shift{0.0, 0.0};
  bool factorized = false;
};

}  // namespace sgmor::linalg

#endif  // SGMOR_LINALG_HPP
