// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include "sgmor/galerkin.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

namespace sgmor
{

namespace
{

// Appends the triplets of G (x) X to entries.
void AppendKron(const SparseMatrix &G, const SparseMatrix &X, std::vector<Triplet> &entries)
{
  const Index rows = X.rows(), cols = X.cols();
  for (Index gj = 0; gj < G.outerSize(); gj++)
  {
    for (SparseMatrix::InnerIterator g(G, gj); g; ++g)
    {
      for (Index xj = 0; xj < X.outerSize(); xj++)
      {
        for (SparseMatrix::InnerIterator x(X, xj); x; ++x)
        {
          const double v = g.value() * x.value();
          if (v != 0.0)
          {
            entries.emplace_back(g.row() * rows + x.row(), g.col() * cols + x.col(), v);
          }
        }
      }
    }
  }
}

SparseMatrix FromTriplets(Index rows, Index cols, const std::vector<Triplet> &entries)
{
  SparseMatrix out(rows, cols);
  out.setFromTriplets(entries.begin(), entries.end());
  out.prune(0.0);
  return out;
}

}  // namespace

std::string GalerkinSystem::ProvenanceTag() const
{
  if (provenance == GalerkinProvenance::exact_affine)
  {
    return "exact-affine";
  }
  return "quadrature(" + std::to_string(quadrature_nodes) + " nodes)";
}

GalerkinSystem Assemble(const AffineParamSystem &aps, const PolynomialChaosBasis &basis)
{
  if (aps.NumParams() != basis.NumParams())
  {
    throw std::invalid_argument("system has " + std::to_string(aps.NumParams()) +
                                " parameters, basis has " + std::to_string(basis.NumParams()));
  }
  if (aps.Distributions() != basis.Distributions())
  {
    throw std::invalid_argument("system and basis distributions differ");
  }
  const Index m = basis.Size();
  const Index n = aps.Order();
  const Index n_in = aps.NumInputs();
  const Index n_out = aps.NumOutputs();

  std::vector<Triplet> e, a, b, c;
  for (int l = 0; l <= aps.NumParams(); l++)
  {
    const LtiSystem &term = aps.Term(l);
    const SparseMatrix G = basis.MomentMatrix(l);
    AppendKron(G, term.E, e);
    AppendKron(G, term.A, a);
    AppendKron(G, term.C, c);
    // E[s (x) B]: first column of G_l.
    const SparseMatrix g1 = G.col(0);
    AppendKron(g1, term.B, b);
  }

  GalerkinSystem out;
  out.system.E = FromTriplets(m * n, m * n, e);
  out.system.A = FromTriplets(m * n, m * n, a);
  out.system.B = FromTriplets(m * n, n_in, b);
  out.system.C = FromTriplets(m * n_out, m * n, c);
  out.basis_size = m;
  out.state_size = n;
  out.provenance = GalerkinProvenance::exact_affine;
  return out;
}

GalerkinSystem AssembleViaQuadrature(const NodeMatrixFunction &matrix_fn,
                                     const PolynomialChaosBasis &basis,
                                     const QuadratureRule &rule, const SparseMatrix &outputs)
{
  if (rule.NumParams() != basis.NumParams())
  {
    throw std::invalid_argument("quadrature rule dimension does not match the basis");
  }
  if (rule.Size() == 0)
  {
    throw std::invalid_argument("quadrature rule is empty");
  }
  for (Index k = 0; k < rule.Size(); k++)
  {
    if (!(rule.weights(k) > 0.0))
    {
      throw std::invalid_argument("quadrature weight " + std::to_string(k) +
                                  " is not positive");
    }
  }
  const Index m = basis.Size();
  const Index K = rule.Size();
  const int q = basis.NumParams();

  Index n = -1, n_in = -1;
  Matrix Pa, Pe, S;   // vec(A'_k), vec(E'_k) as columns; basis values s(mu_k) as columns
  Matrix Bsum;
  std::vector<double> mu(q);
  for (Index k = 0; k < K; k++)
  {
    for (int l = 0; l < q; l++)
    {
      mu[l] = rule.nodes(l, k);
    }
    NodeMatrices node;
    try
    {
      node = matrix_fn(mu);
    }
    catch (const std::exception &ex)
    {
      throw NumericalError("quadrature node " + std::to_string(k) + ": " + ex.what());
    }
    if (n < 0)
    {
      n = node.A.rows();
      n_in = node.B.cols();
      Pa.resize(n * n, K);
      Pe.resize(n * n, K);
      S.resize(m, K);
      Bsum = Matrix::Zero(m * n, n_in);
    }
    if (node.A.rows() != n || node.A.cols() != n || node.E.rows() != n || node.E.cols() != n ||
        node.B.rows() != n || node.B.cols() != n_in)
    {
      throw std::invalid_argument("quadrature node " + std::to_string(k) +
                                  ": matrix dimensions differ from node 0");
    }
    Pa.col(k) = node.A.reshaped();
    Pe.col(k) = node.E.reshaped();
    const Vector s = basis.Evaluate(mu);
    S.col(k) = s;
    const double w = rule.weights(k);
    for (Index i = 0; i < m; i++)
    {
      Bsum.middleRows(i * n, n) += (w * s(i)) * node.B;
    }
  }
  if (outputs.rows() % m != 0 || outputs.cols() != m * n)
  {
    throw std::invalid_argument("output matrix must have m * n columns and m * n_out rows");
  }

  // Q((i, j), k) = gamma_k s_i(mu_k) s_j(mu_k); block (i, j) of the result is the
  // n x n reshape of column (i, j) of P Q^T.
  Matrix Q(m * m, K);
  for (Index k = 0; k < K; k++)
  {
    const double w = rule.weights(k);
    for (Index j = 0; j < m; j++)
    {
      Q.col(k).segment(j * m, m) = (w * S(j, k)) * S.col(k);
    }
  }
  const Matrix Ra = Pa * Q.transpose();
  const Matrix Re = Pe * Q.transpose();

  Matrix At(m * n, m * n), Et(m * n, m * n);
  for (Index j = 0; j < m; j++)
  {
    for (Index i = 0; i < m; i++)
    {
      At.block(i * n, j * n, n, n) = Ra.col(j * m + i).reshaped(n, n);
      Et.block(i * n, j * n, n, n) = Re.col(j * m + i).reshaped(n, n);
    }
  }

  GalerkinSystem out;
  out.system.A = At.sparseView();
  out.system.E = Et.sparseView();
  out.system.B = Bsum.sparseView();
  out.system.C = outputs;
  out.basis_size = m;
  out.state_size = n;
  out.provenance = GalerkinProvenance::quadrature;
  out.quadrature_nodes = K;
  return out;
}

QoiStatistics ComputeQoiStatistics(const PolynomialChaosBasis &basis, const Vector &coefficients)
{
  if (coefficients.size() != basis.Size())
  {
    throw std::invalid_argument("expected " + std::to_string(basis.Size()) +
                                " coefficients, got " + std::to_string(coefficients.size()));
  }
  return {coefficients(0), coefficients.tail(coefficients.size() - 1).squaredNorm()};
}

double ExpandQoi(const PolynomialChaosBasis &basis, const Vector &coefficients,
                 std::span<const double> mu)
{
  if (coefficients.size() != basis.Size())
  {
    throw std::invalid_argument("expected " + std::to_string(basis.Size()) +
                                " coefficients, got " + std::to_string(coefficients.size()));
  }
  return coefficients.dot(basis.Evaluate(mu));
}

void RequireNonsingularMass(const GalerkinSystem &gal)
{
  const SparseMatrix &E = gal.system.E;
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(E);
  if (lu.info() != Eigen::Success)
  {
    throw NumericalError("Galerkin mass matrix is singular");
  }
  // A zero pivot is not always caught by the factorization; test a solve instead.
  const Vector ones = Vector::Ones(E.cols());
  const Vector x = lu.solve(E * ones);
  if (!x.allFinite() || (x - ones).norm() > 1e-6 * ones.norm())
  {
    throw NumericalError("Galerkin mass matrix is numerically singular");
  }
}

}  // namespace sgmor
