// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

// Random test problems shared by the unit and acceptance tests.

#ifndef SGMOR_TESTS_GENERATORS_HPP
#define SGMOR_TESTS_GENERATORS_HPP

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "sgmor/pce.hpp"
#include "sgmor/systems.hpp"
#include "sgmor/types.hpp"

namespace sgmor::testing
{

class Gen
{
public:
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double Normal() { return normal(rng); }
  double Uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int Int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  Matrix Gaussian(Index rows, Index cols)
  {
    Matrix M(rows, cols);
    for (Index j = 0; j < cols; j++)
    {
      for (Index i = 0; i < rows; i++)
      {
        M(i, j) = Normal();
      }
    }
    return M;
  }

  // I + G G^T / n scaled to unit-ish spectrum.
  Matrix Spd(Index n, double floor = 0.5)
  {
    const Matrix G = Gaussian(n, n);
    return floor * Matrix::Identity(n, n) + G * G.transpose() / static_cast<double>(n);
  }

  // E SPD, A with A + A^T negative definite.
  std::pair<Matrix, Matrix> DissipativePair(Index n)
  {
    const Matrix E = Spd(n);
    const Matrix S = Gaussian(n, n);
    const Matrix P = Gaussian(n, n);
    const Matrix A = (S - S.transpose()) / std::sqrt(double(n)) -
                     (P * P.transpose() / double(n) + 0.1 * Matrix::Identity(n, n));
    return {E, A};
  }

  // A = E (N - shift I) with shift above the abscissa of N: stable, usually not
  // dissipative. N has strong non-normal structure.
  std::pair<Matrix, Matrix> StablePair(Index n)
  {
    const Matrix E = Spd(n);
    Matrix N = Gaussian(n, n) / std::sqrt(double(n));
    N.triangularView<Eigen::StrictlyUpper>() *= 3.0;
    const Eigen::VectorXcd ev = N.eigenvalues();
    double abscissa = -1e300;
    for (Index k = 0; k < ev.size(); k++)
    {
      abscissa = std::max(abscissa, ev(k).real());
    }
    const Matrix A = E * (N - (abscissa + Uniform(0.2, 1.0)) * Matrix::Identity(n, n));
    return {E, A};
  }

  // Orthonormal n x r.
  Matrix Orthonormal(Index n, Index r)
  {
    Eigen::HouseholderQR<Matrix> qr(Gaussian(n, r));
    return qr.householderQ() * Matrix::Identity(n, r);
  }

  // Sparse stable ODE: E = I + small symmetric, A = N - shift I with N sparse.
  LtiSystem SparseStable(Index n, double density)
  {
    std::vector<Triplet> e, a;
    for (Index i = 0; i < n; i++)
    {
      e.emplace_back(i, i, 1.0);
      a.emplace_back(i, i, -Uniform(1.0, 3.0));
      for (Index j = 0; j < n; j++)
      {
        if (i != j && Uniform(0.0, 1.0) < density)
        {
          a.emplace_back(i, j, 0.5 * Normal() / std::sqrt(density * n + 1.0));
        }
      }
      if (i + 1 < n)
      {
        const double v = 0.05 * Normal();
        e.emplace_back(i, i + 1, v);
        e.emplace_back(i + 1, i, v);
      }
    }
    LtiSystem sys;
    sys.E.resize(n, n);
    sys.E.setFromTriplets(e.begin(), e.end());
    sys.A.resize(n, n);
    sys.A.setFromTriplets(a.begin(), a.end());
    sys.B = Gaussian(n, 2).sparseView();
    sys.C = Gaussian(1, n).sparseView();
    return sys;
  }

  std::mt19937_64 &Engine() { return rng; }

private:
  std::mt19937_64 rng;
  std::normal_distribution<double> normal{0.0, 1.0};
};

inline double Abscissa(const Matrix &E, const Matrix &A)
{
  Eigen::GeneralizedEigenSolver<Matrix> ges(A, E, false);
  double a = -1e300;
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();
  for (Index k = 0; k < alphas.size(); k++)
  {
    a = std::max(a, (alphas(k) / betas(k)).real());
  }
  return a;
}

inline double MinEig(const Matrix &S)
{
  return Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (S + S.transpose())).eigenvalues()(0);
}

inline double MaxEig(const Matrix &S)
{
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()));
  return es.eigenvalues()(S.rows() - 1);
}

// Generalized Lyapunov solution by vectorization:
// (E^T (x) A^T + A^T (x) E^T) vec(M) = -vec(F). Independent of the library solver.
inline Matrix KroneckerLyapunov(const Matrix &E, const Matrix &A, const Matrix &F)
{
  const Index n = A.rows();
  Matrix K = Matrix::Zero(n * n, n * n);
  for (Index j = 0; j < n; j++)
  {
    for (Index i = 0; i < n; i++)
    {
      K.block(j * n, i * n, n, n) += E(i, j) * A.transpose() + A(i, j) * E.transpose();
    }
  }
  const Vector f = -F.reshaped();
  return K.partialPivLu().solve(f).reshaped(n, n);
}

// H2 norm from the controllability gramian A P E^T + E P A^T + B B^T = 0.
inline double GramianH2(const Matrix &E, const Matrix &A, const Matrix &B, const Matrix &C)
{
  // Transposed problem: A^T-form with (E^T, A^T).
  const Matrix P = KroneckerLyapunov(E.transpose(), A.transpose(), B * B.transpose());
  return std::sqrt((C * P * C.transpose()).trace());
}

// Affine family whose members are dissipative on the whole box [mean +- 1]:
// E_0 dominates the symmetric E_l, sym(A_0) dominates the A_l.
inline AffineParamSystem DissipativeFamily(Gen &g, Index n, int q)
{
  std::vector<LtiSystem> terms(q + 1);
  auto [E0, A0] = g.DissipativePair(n);
  const double emin = MinEig(E0);
  const double amax = -MaxEig(A0);
  for (int l = 0; l <= q; l++)
  {
    Matrix E, A;
    if (l == 0)
    {
      E = E0;
      A = A0;
    }
    else
    {
      const Matrix S = g.Gaussian(n, n);
      E = 0.5 * (S + S.transpose());
      E *= 0.9 * emin / (q * E.operatorNorm());
      A = g.Gaussian(n, n);
      A *= 0.9 * amax / (q * A.operatorNorm());
    }
    terms[l].E = E.sparseView();
    terms[l].A = A.sparseView();
    terms[l].B = (l == 0 ? g.Gaussian(n, 1) : Matrix(0.1 * g.Gaussian(n, 1))).sparseView();
    terms[l].C = (l == 0 ? g.Gaussian(1, n) : Matrix::Zero(1, n)).sparseView();
  }
  std::vector<Distribution> dists;
  for (int l = 0; l < q; l++)
  {
    dists.push_back(Distribution::Uniform(-1.0, 1.0));
  }
  return AffineParamSystem(std::move(terms), std::move(dists));
}

}  // namespace sgmor::testing

#endif  // SGMOR_TESTS_GENERATORS_HPP
