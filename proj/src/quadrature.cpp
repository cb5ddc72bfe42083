// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "sgmor/pce.hpp"

namespace sgmor
{

namespace
{

// psi_n(x) and its derivative via the orthonormal recurrence.
std::pair<double, double> EvaluateWithDerivative(DistributionKind kind, int n, double x)
{
  double p_prev = 0.0, p = 1.0;
  double d_prev = 0.0, d = 0.0;
  for (int k = 0; k < n; k++)
  {
    const double b_next = RecurrenceCoefficient(kind, k + 1);
    const double b_k = k > 0 ? RecurrenceCoefficient(kind, k) : 0.0;
    const double p_next = (x * p - b_k * p_prev) / b_next;
    const double d_next = (p + x * d - b_k * d_prev) / b_next;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {p, d};
}

}  // namespace

QuadratureRule GaussRule(DistributionKind kind, int num_nodes)
{
  if (num_nodes < 1)
  {
    throw std::invalid_argument("Gauss rule needs at least one node");
  }
  const int n = num_nodes;

  // Golub-Welsch: the nodes are the eigenvalues of the Jacobi matrix.
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; k++)
  {
    jacobi(k, k - 1) = jacobi(k - 1, k) = RecurrenceCoefficient(kind, k);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi, Eigen::EigenvaluesOnly);
  Vector x = eig.eigenvalues();

  // Newton polish on psi_n, then enforce the symmetry of the even densities.
  for (int i = 0; i < n; i++)
  {
    for (int it = 0; it < 2; it++)
    {
      const auto [p, d] = EvaluateWithDerivative(kind, n, x(i));
      if (d != 0.0)
      {
        x(i) -= p / d;
      }
    }
  }
  for (int i = 0; i < n / 2; i++)
  {
    const double r = 0.5 * (x(n - 1 - i) - x(i));
    x(i) = -r;
    x(n - 1 - i) = r;
  }
  if (n % 2 == 1)
  {
    x(n / 2) = 0.0;
  }

  // Christoffel weights 1 / sum_k psi_k(x)^2 for the probability measure.
  QuadratureRule rule;
  rule.nodes = x.transpose();
  rule.weights.resize(n);
  for (int i = 0; i < n; i++)
  {
    rule.weights(i) = 1.0 / EvaluateUnivariate(kind, n - 1, x(i)).squaredNorm();
  }
  return rule;
}

QuadratureRule TensorRule(std::span<const Distribution> dists, int nodes_per_dim,
                          std::size_t node_cap)
{
  if (nodes_per_dim < 1)
  {
    throw std::invalid_argument("tensor rule needs nodes_per_dim >= 1");
  }
  if (dists.empty())
  {
    throw std::invalid_argument("tensor rule needs at least one parameter");
  }
  const std::size_t q = dists.size();
  std::size_t total = 1;
  for (std::size_t l = 0; l < q; l++)
  {
    if (total > node_cap / static_cast<std::size_t>(nodes_per_dim))
    {
      throw std::length_error("tensor rule with " + std::to_string(nodes_per_dim) + "^" +
                              std::to_string(q) + " nodes exceeds the cap of " +
                              std::to_string(node_cap) + "; use a Monte-Carlo rule instead");
    }
    total *= static_cast<std::size_t>(nodes_per_dim);
  }

  std::vector<QuadratureRule> factors;
  factors.reserve(q);
  for (const auto &dist : dists)
  {
    factors.push_back(GaussRule(dist.Kind(), nodes_per_dim));
  }

  QuadratureRule rule;
  rule.nodes.resize(static_cast<Index>(q), static_cast<Index>(total));
  rule.weights.resize(static_cast<Index>(total));
  std::vector<int> digit(q, 0);
  for (std::size_t k = 0; k < total; k++)
  {
    double w = 1.0;
    for (std::size_t l = 0; l < q; l++)
    {
      rule.nodes(l, k) = dists[l].FromStandard(factors[l].nodes(0, digit[l]));
      w *= factors[l].weights(digit[l]);
    }
    rule.weights(k) = w;
    // Last parameter varies fastest.
    for (std::size_t l = q; l-- > 0;)
    {
      if (++digit[l] < nodes_per_dim)
      {
        break;
      }
      digit[l] = 0;
    }
  }
  return rule;
}

QuadratureRule MonteCarloRule(std::span<const Distribution> dists, Index num_samples,
                              std::uint64_t seed)
{
  if (num_samples < 1)
  {
    throw std::invalid_argument("Monte-Carlo rule needs at least one sample");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  QuadratureRule rule;
  rule.nodes.resize(static_cast<Index>(dists.size()), num_samples);
  rule.weights = Vector::Constant(num_samples, 1.0 / static_cast<double>(num_samples));
  for (Index k = 0; k < num_samples; k++)
  {
    for (std::size_t l = 0; l < dists.size(); l++)
    {
      const double xi = dists[l].Kind() == DistributionKind::uniform ? uniform(rng)
                                                                      : normal(rng);
      rule.nodes(static_cast<Index>(l), k) = dists[l].FromStandard(xi);
    }
  }
  return rule;
}

}  // namespace sgmor
