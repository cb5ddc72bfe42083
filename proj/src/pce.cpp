// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include "sgmor/pce.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sgmor
{

Distribution Distribution::Uniform(double lower, double upper)
{
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper))
  {
    throw std::invalid_argument("uniform distribution requires finite bounds a < b");
  }
  return {DistributionKind::uniform, 0.5 * (lower + upper), 0.5 * (upper - lower)};
}

Distribution Distribution::Gaussian(double mean, double stddev)
{
  if (!(stddev > 0.0) || !std::isfinite(mean) || !std::isfinite(stddev))
  {
    throw std::invalid_argument("gaussian distribution requires stddev > 0");
  }
  return {DistributionKind::gaussian, mean, stddev};
}

double Distribution::Lower() const
{
  return kind == DistributionKind::uniform ? center - scale
                                           : -std::numeric_limits<double>::infinity();
}

double Distribution::Upper() const
{
  return kind == DistributionKind::uniform ? center + scale
                                           : std::numeric_limits<double>::infinity();
}

double Distribution::ToStandard(double mu) const
{
  if (IsDegenerate())
  {
    throw std::domain_error("standard coordinate undefined for a point-mass parameter");
  }
  return (mu - center) / scale;
}

Distribution Distribution::Contracted(double theta) const
{
  if (!(theta >= 0.0 && theta <= 1.0))
  {
    throw std::invalid_argument("contraction factor theta must lie in [0, 1]");
  }
  return {kind, center, theta * scale};
}

double RecurrenceCoefficient(DistributionKind kind, int k)
{
  if (k < 1)
  {
    throw std::invalid_argument("recurrence coefficient index must be >= 1");
  }
  const double kk = k;
  switch (kind)
  {
    case DistributionKind::uniform:
      return kk / std::sqrt(4.0 * kk * kk - 1.0);
    case DistributionKind::gaussian:
      return std::sqrt(kk);
  }
  throw std::invalid_argument("unsupported distribution kind");
}

Vector EvaluateUnivariate(DistributionKind kind, int degree, double xi)
{
  Vector psi(degree + 1);
  psi(0) = 1.0;
  if (degree >= 1)
  {
    psi(1) = xi / RecurrenceCoefficient(kind, 1);
  }
  for (int k = 1; k < degree; k++)
  {
    psi(k + 1) = (xi * psi(k) - RecurrenceCoefficient(kind, k) * psi(k - 1)) /
                 RecurrenceCoefficient(kind, k + 1);
  }
  return psi;
}

int MultiIndex::TotalDegree() const
{
  return std::accumulate(exponents.begin(), exponents.end(), 0);
}

std::size_t BasisCount(int num_params, int degree)
{
  if (num_params < 1 || degree < 0)
  {
    throw std::invalid_argument("basis count requires q >= 1 and d >= 0");
  }
  // C(d+q, d) built as prod_{k=1..d} (q+k)/k; every partial product is itself a binomial
  // coefficient, so the division is exact.
  unsigned __int128 count = 1;
  for (int k = 1; k <= degree; k++)
  {
    count = count * static_cast<unsigned>(num_params + k) / static_cast<unsigned>(k);
    if (count > std::numeric_limits<std::uint64_t>::max())
    {
      throw std::overflow_error("basis count (d+q)!/(d!q!) exceeds 64-bit range for q=" +
                                std::to_string(num_params) +
                                ", d=" + std::to_string(degree));
    }
  }
  return static_cast<std::size_t>(count);
}

namespace
{

void AppendWithDegree(int remaining, std::size_t pos, std::vector<int> &current,
                      std::vector<MultiIndex> &out)
{
  if (pos + 1 == current.size())
  {
    current[pos] = remaining;
    out.push_back({current});
    return;
  }
  for (int e = remaining; e >= 0; e--)
  {
    current[pos] = e;
    AppendWithDegree(remaining - e, pos + 1, current, out);
  }
  current[pos] = 0;
}

}  // namespace

std::vector<MultiIndex> GradedIndices(int num_params, int degree)
{
  const std::size_t count = BasisCount(num_params, degree);
  std::vector<MultiIndex> out;
  out.reserve(count);
  std::vector<int> current(num_params, 0);
  for (int t = 0; t <= degree; t++)
  {
    AppendWithDegree(t, 0, current, out);
  }
  return out;
}

PolynomialChaosBasis::PolynomialChaosBasis(std::vector<Distribution> dists_, int degree_)
  : dists(std::move(dists_)), degree(degree_)
{
  if (dists.empty())
  {
    throw std::invalid_argument("polynomial chaos basis needs at least one parameter");
  }
  indices = GradedIndices(NumParams(), degree);
  for (Index i = 0; i < Size(); i++)
  {
    lookup.emplace(indices[i], i);
  }

  // psi_a psi_b xi has degree <= 2d+1; d+2 Gauss nodes integrate degree 2d+3 exactly.
  first_moments.reserve(dists.size());
  for (const auto &dist : dists)
  {
    const QuadratureRule rule = GaussRule(dist.Kind(), degree + 2);
    Matrix moments = Matrix::Zero(degree + 1, degree + 1);
    for (Index k = 0; k < rule.Size(); k++)
    {
      const double xi = rule.nodes(0, k);
      const Vector psi = EvaluateUnivariate(dist.Kind(), degree, xi);
      moments.noalias() += rule.weights(k) * xi * psi * psi.transpose();
    }
    // Both standard densities are even, so the odd integrands vanish exactly.
    for (int a = 0; a <= degree; a++)
    {
      for (int b = 0; b <= degree; b++)
      {
        if ((a + b) % 2 == 0)
        {
          moments(a, b) = 0.0;
        }
      }
    }
    first_moments.push_back(0.5 * (moments + moments.transpose()));
  }
}

std::optional<Index> PolynomialChaosBasis::Position(const MultiIndex &index) const
{
  const auto it = lookup.find(index);
  if (it == lookup.end())
  {
    return std::nullopt;
  }
  return it->second;
}

Vector PolynomialChaosBasis::EvaluateStandard(std::span<const double> xi) const
{
  if (static_cast<int>(xi.size()) != NumParams())
  {
    throw std::invalid_argument("parameter vector has length " + std::to_string(xi.size()) +
                                ", basis expects " + std::to_string(NumParams()));
  }
  std::vector<Vector> univariate;
  univariate.reserve(dists.size());
  for (std::size_t l = 0; l < dists.size(); l++)
  {
    univariate.push_back(EvaluateUnivariate(dists[l].Kind(), degree, xi[l]));
  }
  Vector s(Size());
  for (Index i = 0; i < Size(); i++)
  {
    double value = 1.0;
    const auto &e = indices[i].exponents;
    for (std::size_t l = 0; l < e.size(); l++)
    {
      if (e[l] > 0)
      {
        value *= univariate[l](e[l]);
      }
    }
    s(i) = value;
  }
  return s;
}

Vector PolynomialChaosBasis::Evaluate(std::span<const double> mu) const
{
  if (static_cast<int>(mu.size()) != NumParams())
  {
    throw std::invalid_argument("parameter vector has length " + std::to_string(mu.size()) +
                                ", basis expects " + std::to_string(NumParams()));
  }
  std::vector<double> xi(mu.size());
  for (std::size_t l = 0; l < mu.size(); l++)
  {
    xi[l] = dists[l].ToStandard(mu[l]);
  }
  return EvaluateStandard(xi);
}

Matrix PolynomialChaosBasis::Outer(std::span<const double> mu) const
{
  const Vector s = Evaluate(mu);
  return s * s.transpose();
}

SparseMatrix PolynomialChaosBasis::MomentMatrix(int l) const
{
  if (l < 0 || l > NumParams())
  {
    throw std::out_of_range("moment index " + std::to_string(l) + " outside 0.." +
                            std::to_string(NumParams()));
  }
  const Index m = Size();
  SparseMatrix G(m, m);
  std::vector<Triplet> entries;
  if (l == 0)
  {
    G.setIdentity();
    return G;
  }

  // E[mu_l Phi_i Phi_j] = center * delta_ij + scale * E[xi_l Phi_i Phi_j]; the second term
  // factorizes into univariate moments and vanishes unless i, j differ only in coordinate l.
  const Distribution &dist = dists[l - 1];
  const Matrix &T = first_moments[l - 1];
  entries.reserve(3 * m);
  for (Index i = 0; i < m; i++)
  {
    MultiIndex neighbor = indices[i];
    const int a = neighbor.exponents[l - 1];
    for (int b = std::max(0, a - 1); b <= a + 1; b++)
    {
      neighbor.exponents[l - 1] = b;
      const auto j = Position(neighbor);
      if (!j)
      {
        continue;
      }
      double value = dist.Scale() * T(a, b);
      if (*j == i)
      {
        value += dist.Mean();
      }
      if (value != 0.0)
      {
        entries.emplace_back(i, *j, value);
      }
    }
  }
  G.setFromTriplets(entries.begin(), entries.end());
  return G;
}

}  // namespace sgmor
