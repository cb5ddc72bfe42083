// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include "sgmor/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "sgmor/linalg.hpp"

namespace sgmor
{

namespace
{

void RequireSquare(const Matrix &E, const Matrix &A, const Matrix &F)
{
  const Index n = A.rows();
  if (A.cols() != n || E.rows() != n || E.cols() != n || F.rows() != n || F.cols() != n)
  {
    throw std::invalid_argument("Lyapunov equation needs square E, A, F of equal size");
  }
}

// Solves S^T Y T + T^T Y S = C for quasi-upper-triangular S and upper-triangular T.
class QzLyapunov
{
public:
  QzLyapunov(const Matrix &S, const Matrix &T) : S(S), T(T)
  {
    const Index n = S.rows();
    Index k = 0;
    while (k < n)
    {
      const Index size = (k + 1 < n && S(k + 1, k) != 0.0) ? 2 : 1;
      starts.push_back(k);
      sizes.push_back(size);
      k += size;
    }
  }

  Matrix Solve(const Matrix &C) const
  {
    const Index n = C.rows();
    const Index nb = static_cast<Index>(starts.size());
    Matrix Y = Matrix::Zero(n, n);
    for (Index bq = 0; bq < nb; bq++)
    {
      const Index q0 = starts[bq], r = sizes[bq];
      // Contributions of the finished columns j < q.
      Matrix rhs = C.middleCols(q0, r);
      if (q0 > 0)
      {
        const Matrix U = Y.leftCols(q0) * T.block(0, q0, q0, r);
        const Matrix W = Y.leftCols(q0) * S.block(0, q0, q0, r);
        rhs.noalias() -= S.transpose() * U;
        rhs.noalias() -= T.transpose() * W;
      }
      const Matrix Sqq = S.block(q0, q0, r, r);
      const Matrix Tqq = T.block(q0, q0, r, r);
      Matrix Z1 = Matrix::Zero(n, r);   // Y(:, q) T_qq
      Matrix Z2 = Matrix::Zero(n, r);   // Y(:, q) S_qq
      for (Index bp = 0; bp < nb; bp++)
      {
        const Index p0 = starts[bp], p = sizes[bp];
        Matrix R = rhs.middleRows(p0, p);
        if (p0 > 0)
        {
          R.noalias() -= S.block(0, p0, p0, p).transpose() * Z1.topRows(p0);
          R.noalias() -= T.block(0, p0, p0, p).transpose() * Z2.topRows(p0);
        }
        // (T_qq^T (x) S_pp^T + S_qq^T (x) T_pp^T) vec(Y_pq) = vec(R)
        const Matrix Spp = S.block(p0, p0, p, p);
        const Matrix Tpp = T.block(p0, p0, p, p);
        Matrix K(p * r, p * r);
        for (Index c = 0; c < r; c++)
        {
          for (Index d = 0; d < r; d++)
          {
            K.block(d * p, c * p, p, p) =
              Tqq(c, d) * Spp.transpose() + Sqq(c, d) * Tpp.transpose();
          }
        }
        Eigen::FullPivLU<Matrix> lu(K);
        if (!lu.isInvertible())
        {
          throw NumericalError("Lyapunov operator is singular (eigenvalues sum to zero)");
        }
        const Vector y = lu.solve(R.reshaped());
        const Matrix Ypq = y.reshaped(p, r);
        Y.block(p0, q0, p, r) = Ypq;
        Z1.middleRows(p0, p) = Ypq * Tqq;
        Z2.middleRows(p0, p) = Ypq * Sqq;
      }
    }
    return Y;
  }

private:
  const Matrix &S;
  const Matrix &T;
  std::vector<Index> starts, sizes;
};

}  // namespace

Matrix SolveLyapDirect(const Matrix &E, const Matrix &A, const Matrix &F)
{
  RequireSquare(E, A, F);
  const Index n = A.rows();
  if (n == 0)
  {
    return Matrix(0, 0);
  }
  Eigen::PartialPivLU<Matrix> elu(E);
  if (!(elu.rcond() > 100.0 * std::numeric_limits<double>::epsilon()))
  {
    throw NumericalError("Lyapunov equation: E is singular, no positive definite solution");
  }

  // A = Q S Z, E = Q T Z.
  Eigen::RealQZ<Matrix> qz(A, E);
  if (qz.info() != Eigen::Success)
  {
    throw NumericalError("Lyapunov equation: QZ decomposition failed");
  }
  const Matrix &S = qz.matrixS();
  const Matrix &T = qz.matrixT();
  const Matrix &Q = qz.matrixQ();
  const Matrix &Z = qz.matrixZ();

  double abscissa = -std::numeric_limits<double>::infinity();
  for (Index k = 0; k < n; k++)
  {
    if (k + 1 < n && S(k + 1, k) != 0.0)
    {
      const Matrix Sb = S.block(k, k, 2, 2);
      const Matrix Tb = T.block(k, k, 2, 2);
      abscissa = std::max(abscissa, 0.5 * Tb.partialPivLu().solve(Sb).trace());
      k++;
    }
    else
    {
      abscissa = std::max(abscissa, S(k, k) / T(k, k));
    }
  }
  if (!(abscissa < 0.0))
  {
    std::ostringstream msg;
    msg << "Lyapunov equation: pencil is not asymptotically stable (abscissa " << abscissa
        << ")";
    throw NumericalError(msg.str());
  }

  const QzLyapunov solver(S, T);
  auto solve = [&](const Matrix &R) -> Matrix
  {
    // S^T Y T + T^T Y S = -Z R Z^T, M = Q Y Q^T
    const Matrix C = -(Z * R * Z.transpose());
    return Q * solver.Solve(C) * Q.transpose();
  };

  Matrix M = solve(F);
  M = 0.5 * (M + M.transpose()).eval();
  const Matrix residual = A.transpose() * M * E + E.transpose() * M * A + F;
  M += solve(residual);
  M = 0.5 * (M + M.transpose()).eval();
  if (!M.allFinite())
  {
    throw NumericalError("Lyapunov equation: non-finite solution");
  }
  return M;
}

Matrix SolveLyapParam(const AffineParamSystem &aps, std::span<const double> mu, const Matrix &F)
{
  const LtiSystem sys = aps.Evaluate(mu);
  try
  {
    return SolveLyapDirect(Matrix(sys.E), Matrix(sys.A), F);
  }
  catch (const NumericalError &ex)
  {
    std::ostringstream msg;
    msg.precision(17);
    msg << ex.what() << " at mu = (";
    for (std::size_t l = 0; l < mu.size(); l++)
    {
      msg << (l ? ", " : "") << mu[l];
    }
    msg << ")";
    throw NumericalError(msg.str());
  }
}

double LyapResidual(const Matrix &E, const Matrix &A, const Matrix &F, const Matrix &M)
{
  RequireSquare(E, A, F);
  if (M.rows() != A.rows() || M.cols() != A.rows())
  {
    throw std::invalid_argument("Lyapunov residual: M has the wrong size");
  }
  const double f = F.norm();
  const Matrix R = A.transpose() * M * E + E.transpose() * M * A + F;
  return f == 0.0 ? R.norm() : R.norm() / f;
}

double AccuracyBound(const Matrix &E, const Matrix &A)
{
  const double a = linalg::SpectralNorm(A);
  const double e = linalg::SpectralNorm(E);
  if (a == 0.0 || e == 0.0)
  {
    throw std::invalid_argument("accuracy bound undefined for zero matrices");
  }
  // The transpose has the same spectral norm.
  return 1.0 / (2.0 * a * e);
}

Matrix FreqProjection(const SparseMatrix &E, const SparseMatrix &A, const SparseMatrix &F,
                      const Matrix &V, const FrequencyRule &rule)
{
  const Index n = A.rows();
  if (A.cols() != n || E.rows() != n || E.cols() != n || F.rows() != n || F.cols() != n)
  {
    throw std::invalid_argument("frequency projection needs square E, A, F of equal size");
  }
  if (V.rows() != n)
  {
    throw std::invalid_argument("frequency projection: V must have " + std::to_string(n) +
                                " rows");
  }
  linalg::ShiftedSolver solver(E, A);
  const ComplexMatrix EV = (E * V).cast<Complex>();
  const ComplexSparseMatrix Fc = F.cast<Complex>();
  Matrix W = Matrix::Zero(n, V.cols());
  const auto &omegas = rule.Omegas();
  const auto &weights = rule.FoldedWeights();
  for (std::size_t j = 0; j < omegas.size(); j++)
  {
    solver.Factorize({0.0, omegas[j]});
    const ComplexMatrix X = solver.Solve(EV);
    const ComplexMatrix Y = Fc * X;
    W += weights[j] * solver.SolveAdjoint(Y).real();
  }
  return W;
}

Matrix FreqProjection(const SparseMatrix &E, const SparseMatrix &A, const Matrix &V,
                      const FrequencyRule &rule)
{
  SparseMatrix I(A.rows(), A.rows());
  I.setIdentity();
  return FreqProjection(E, A, I, V, rule);
}

}  // namespace sgmor
