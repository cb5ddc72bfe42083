// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include "sgmor/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace sgmor::linalg
{

double LargestSymmetricEigenvalue(const Matrix &S)
{
  if (S.rows() != S.cols() || S.rows() == 0)
  {
    throw std::invalid_argument("symmetric eigenvalue needs a non-empty square matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(S.rows() - 1);
}

double LargestSymmetricEigenvalue(const SparseMatrix &S, Index dense_threshold)
{
  if (S.rows() < dense_threshold)
  {
    return LargestSymmetricEigenvalue(Matrix(S));
  }
  return LanczosLargestEigenvalue(S);
}

double LanczosLargestEigenvalue(const SparseMatrix &S, int max_steps, double tol)
{
  const Index n = S.rows();
  if (n != S.cols() || n == 0)
  {
    throw std::invalid_argument("Lanczos needs a non-empty square matrix");
  }
  const int steps = static_cast<int>(std::min<Index>(max_steps, n));
  Matrix Q(n, steps + 1);
  std::vector<double> alpha, beta;

  // Deterministic start vector with nonzero overlap on every coordinate.
  Vector q = Vector::LinSpaced(n, 1.0, 2.0);
  Q.col(0) = q.normalized();

  double estimate = 0.0;
  for (int j = 0; j < steps; j++)
  {
    Vector w = S * Q.col(j);
    alpha.push_back(Q.col(j).dot(w));
    // Full reorthogonalization, twice.
    for (int pass = 0; pass < 2; pass++)
    {
      w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).transpose() * w);
    }
    const double b = w.norm();

    Matrix T = Matrix::Zero(j + 1, j + 1);
    for (int k = 0; k <= j; k++)
    {
      T(k, k) = alpha[k];
      if (k < j)
      {
        T(k, k + 1) = T(k + 1, k) = beta[k];
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(T);
    estimate = eig.eigenvalues()(j);
    // Residual norm of the Ritz pair: |b * last component of the Ritz vector|.
    const double residual = std::abs(b * eig.eigenvectors()(j, j));
    const double ref = std::max({std::abs(estimate), std::abs(eig.eigenvalues()(0)), 1e-300});
    if (residual <= tol * ref || b <= tol * ref)
    {
      return estimate;
    }
    beta.push_back(b);
    Q.col(j + 1) = w / b;
  }
  return estimate;
}

double SpectralNorm(const Matrix &M)
{
  if (M.size() == 0)
  {
    return 0.0;
  }
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

Matrix BlockDiagonalApply(const Matrix &X, const Matrix &Y)
{
  const Index n = X.cols();
  if (n == 0 || Y.rows() % n != 0)
  {
    throw std::invalid_argument("block-diagonal apply: row count is not a multiple of block size");
  }
  Matrix out(Y.rows(), Y.cols());
  for (Index i = 0; i < Y.rows() / n; i++)
  {
    out.middleRows(i * n, n).noalias() = X * Y.middleRows(i * n, n);
  }
  return out;
}

SparseMatrix BlockDiagonal(const Matrix &X, Index m)
{
  const Index n = X.rows();
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(m * X.size()));
  for (Index b = 0; b < m; b++)
  {
    for (Index j = 0; j < X.cols(); j++)
    {
      for (Index i = 0; i < n; i++)
      {
        if (X(i, j) != 0.0)
        {
          entries.emplace_back(b * n + i, b * X.cols() + j, X(i, j));
        }
      }
    }
  }
  SparseMatrix out(m * n, m * X.cols());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

double MaxAbsDifference(const SparseMatrix &X, const SparseMatrix &Y)
{
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
  {
    throw std::invalid_argument("matrix difference: dimension mismatch");
  }
  const SparseMatrix D = X - Y;
  double out = 0.0;
  for (Index k = 0; k < D.outerSize(); k++)
  {
    for (SparseMatrix::InnerIterator it(D, k); it; ++it)
    {
      out = std::max(out, std::abs(it.value()));
    }
  }
  return out;
}

ShiftedSolver::ShiftedSolver(const SparseMatrix &E_, const SparseMatrix &A_)
  : E(E_.cast<Complex>()), A(A_.cast<Complex>())
{
  if (E.rows() != E.cols() || A.rows() != A.cols() || E.rows() != A.rows())
  {
    throw std::invalid_argument("shifted solver needs square E and A of equal size");
  }
  // Structural union of E and A; explicit zeros keep the pattern fixed for every shift.
  const ComplexSparseMatrix pattern = E + A;
  lu.analyzePattern(pattern);
}

void ShiftedSolver::Factorize(Complex s)
{
  ComplexSparseMatrix K = s * E - A;
  lu.factorize(K);
  shift = s;
  factorized = lu.info() == Eigen::Success;
  if (!factorized)
  {
    std::ostringstream msg;
    msg.precision(17);
    msg << "sE - A is singular at s = " << s.real() << (s.imag() < 0 ? "-" : "+")
        << std::abs(s.imag()) << "i";
    throw NumericalError(msg.str());
  }
}

ComplexMatrix ShiftedSolver::Solve(const ComplexMatrix &rhs) const
{
  if (!factorized)
  {
    throw std::logic_error("ShiftedSolver::Solve called before Factorize");
  }
  ComplexMatrix X = lu.solve(rhs);
  if (!X.allFinite())
  {
    throw NumericalError("non-finite solution of the shifted system");
  }
  return X;
}

ComplexMatrix ShiftedSolver::SolveAdjoint(const ComplexMatrix &rhs) const
{
  if (!factorized)
  {
    throw std::logic_error("ShiftedSolver::SolveAdjoint called before Factorize");
  }
  ComplexMatrix X = lu.adjoint().solve(rhs);
  if (!X.allFinite())
  {
    throw NumericalError("non-finite solution of the adjoint shifted system");
  }
  return X;
}

}  // namespace sgmor::linalg
