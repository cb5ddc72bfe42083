// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_PCE_HPP
#define SGMOR_PCE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sgmor/types.hpp"

namespace sgmor
{

enum class DistributionKind
{
  uniform,
  gaussian
};

// A scalar random parameter, stored as an affine image mu = center + scale * xi of a
// standard variable xi (uniform on [-1, 1] or standard normal). Polynomial families are
// always evaluated in xi, which keeps the three-term recurrences in canonical form.
class Distribution
{
public:
  static Distribution Uniform(double lower, double upper);
  static Distribution Gaussian(double mean, double stddev);

  DistributionKind Kind() const { return kind; }
  double Mean() const { return center; }
  double Scale() const { return scale; }

  // Support bounds; infinite for Gaussian parameters.
  double Lower() const;
  double Upper() const;

  double ToStandard(double mu) const;
  double FromStandard(double xi) const { return center + scale * xi; }

  // Member of the family mu* + theta * (mu - mu*) around the mean, theta in [0, 1].
  // theta = 0 yields a point mass at the mean.
  Distribution Contracted(double theta) const;
  bool IsDegenerate() const { return scale == 0.0; }

  bool operator==(const Distribution &) const = default;

private:
  Distribution(DistributionKind kind, double center, double scale)
    : kind(kind), center(center), scale(scale)
  {
  }

  DistributionKind kind;
  double center;
  double scale;
};

// Three-term recurrence xi * psi_k = b_{k+1} psi_{k+1} + b_k psi_{k-1} of the orthonormal
// family belonging to a standard variable. Returns b_k for k >= 1.
double RecurrenceCoefficient(DistributionKind kind, int k);

// Values psi_0(xi), ..., psi_degree(xi) of the orthonormal univariate family.
Vector EvaluateUnivariate(DistributionKind kind, int degree, double xi);

// Exponents (i_1, ..., i_q) of one multivariate basis polynomial.
struct MultiIndex
{
  std::vector<int> exponents;

  int TotalDegree() const;
  auto operator<=>(const MultiIndex &) const = default;
};

// Number of multi-indices with q entries and total degree <= d, i.e. (d+q)!/(d!q!).
// Throws std::overflow_error when the count does not fit in 64 bits.
std::size_t BasisCount(int num_params, int degree);

// All multi-indices of total degree <= d in graded lexicographic order: degree 0 first,
// then within each degree larger leading exponents first.
std::vector<MultiIndex> GradedIndices(int num_params, int degree);

// Orthonormal polynomial chaos basis of total degree <= d for independent parameters.
// Legendre polynomials for uniform parameters, probabilists' Hermite for Gaussian ones.
class PolynomialChaosBasis
{
public:
  PolynomialChaosBasis(std::vector<Distribution> dists, int degree);

  int NumParams() const { return static_cast<int>(dists.size()); }
  int Degree() const { return degree; }
  Index Size() const { return static_cast<Index>(indices.size()); }

  const std::vector<MultiIndex> &Indices() const { return indices; }
  const std::vector<Distribution> &Distributions() const { return dists; }
  std::optional<Index> Position(const MultiIndex &index) const;

  // s(mu) = (Phi_1(mu), ..., Phi_m(mu)); Phi_1 == 1.
  Vector Evaluate(std::span<const double> mu) const;
  // Same, given the standardized coordinates xi directly.
  Vector EvaluateStandard(std::span<const double> xi) const;
  // S(mu) = s(mu) s(mu)^T.
  Matrix Outer(std::span<const double> mu) const;

  // G_0 = E[Phi_i Phi_j] (the identity) and G_l = E[mu_l Phi_i Phi_j] for l = 1..q.
  SparseMatrix MomentMatrix(int l) const;

  // Moments E[xi psi_a psi_b] of the standardized univariate family of parameter l
  // (1-based), tabulated for a, b = 0..degree by Gauss quadrature.
  const Matrix &UnivariateFirstMoments(int l) const { return first_moments.at(l - 1); }

private:
  std::vector<Distribution> dists;
  int degree;
  std::vector<MultiIndex> indices;
  std::map<MultiIndex, Index> lookup;
  std::vector<Matrix> first_moments;
};

// Nodes (one column per node, q rows) and weights of a multivariate rule for the joint
// parameter distribution. Weights are normalized to the probability measure.
struct QuadratureRule
{
  Matrix nodes;
  Vector weights;

  Index Size() const { return weights.size(); }
  Index NumParams() const { return nodes.rows(); }
};

// Gauss rule with n nodes for a standard variable, weights summing to one.
QuadratureRule GaussRule(DistributionKind kind, int num_nodes);

inline constexpr std::size_t kDefaultTensorNodeCap = 1'000'000;

// Tensor product of Gauss rules. Throws std::length_error above the node cap; use
// MonteCarloRule for high-dimensional parameter spaces.
QuadratureRule TensorRule(std::span<const Distribution> dists, int nodes_per_dim,
                          std::size_t node_cap = kDefaultTensorNodeCap);

// k i.i.d. samples of the joint distribution with weights 1/k, reproducible from seed.
QuadratureRule MonteCarloRule(std::span<const Distribution> dists, Index num_samples,
                              std::uint64_t seed);

}  // namespace sgmor

#endif  // SGMOR_PCE_HPP
