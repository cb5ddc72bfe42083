// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include "sgmor/bench.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgmor
{

namespace
{

constexpr int kGround = -1;

// Two-terminal stamp of value v between nodes a and b (either may be ground) into
// rows/cols offset by (row0, col0), with the given sign.
void Stamp(std::vector<Triplet> &t, Index row0, Index col0, int a, int b, double v)
{
  if (a != kGround)
  {
    t.emplace_back(row0 + a, col0 + a, v);
  }
  if (b != kGround)
  {
    t.emplace_back(row0 + b, col0 + b, v);
  }
  if (a != kGround && b != kGround)
  {
    t.emplace_back(row0 + a, col0 + b, -v);
    t.emplace_back(row0 + b, col0 + a, -v);
  }
}

SparseMatrix Build(Index rows, Index cols, const std::vector<Triplet> &t)
{
  SparseMatrix M(rows, cols);
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

// Every matrix is linear in the parameters, so the affine terms are the differences of
// the assembly at unit vectors and at zero.
AffineParamSystem AffineFromAssembly(LtiSystem (*assemble)(std::span<const double>),
                                     std::vector<Distribution> dists)
{
  const int q = static_cast<int>(dists.size());
  std::vector<double> mu(q, 0.0);
  std::vector<LtiSystem> terms;
  const LtiSystem zero = assemble(mu);
  terms.push_back(zero);
  for (int l = 0; l < q; l++)
  {
    mu.assign(q, 0.0);
    mu[l] = 1.0;
    LtiSystem unit = assemble(mu);
    LtiSystem term{unit.E - zero.E, unit.A - zero.A, unit.B - zero.B, unit.C - zero.C};
    term.E.prune(0.0);
    term.A.prune(0.0);
    term.B.prune(0.0);
    term.C.prune(0.0);
    terms.push_back(std::move(term));
  }
  return AffineParamSystem(std::move(terms), std::move(dists));
}

template <std::size_t N>
void RequirePositive(const std::array<double, N> &values, const char *name)
{
  for (std::size_t k = 0; k < N; k++)
  {
    if (!(values[k] > 0.0))
    {
      throw std::invalid_argument(std::string(name) + " " + std::to_string(k + 1) +
                                  " must be positive");
    }
  }
}

void RequireVariation(double variation)
{
  if (!(variation >= 0.0 && variation < 1.0))
  {
    throw std::invalid_argument("relative variation must lie in [0, 1)");
  }
}

Distribution Around(double nominal, double variation)
{
  if (variation == 0.0)
  {
    // Point mass at the nominal value.
    return Distribution::Uniform(nominal * 0.5, nominal * 1.5).Contracted(0.0);
  }
  return Distribution::Uniform(nominal * (1.0 - variation), nominal * (1.0 + variation));
}

}  // namespace

void MsdConfig::Validate() const
{
  RequirePositive(masses, "mass");
  RequirePositive(springs, "spring constant");
  RequirePositive(dampers, "damping constant");
  RequireVariation(variation);
}

LtiSystem AssembleMsd(std::span<const double> p)
{
  if (p.size() != kMsdParams)
  {
    throw std::invalid_argument("mass-spring-damper model has 17 parameters");
  }
  constexpr int nq = 5;
  constexpr std::pair<int, int> springs[7] = {{kGround, 0}, {0, 1}, {1, 2}, {2, 3},
                                              {3, 4},       {0, 2}, {2, 4}};
  constexpr std::pair<int, int> dampers[5] = {{kGround, 0}, {0, 1}, {1, 2}, {2, 3}, {3, 4}};

  std::vector<Triplet> e, a, b, c;
  for (int i = 0; i < nq; i++)
  {
    e.emplace_back(i, i, 1.0);
    e.emplace_back(nq + i, nq + i, p[i]);
    a.emplace_back(i, nq + i, 1.0);
  }
  for (int k = 0; k < 7; k++)
  {
    Stamp(a, nq, 0, springs[k].first, springs[k].second, -p[5 + k]);
  }
  for (int k = 0; k < 5; k++)
  {
    Stamp(a, nq, nq, dampers[k].first, dampers[k].second, -p[12 + k]);
  }
  b.emplace_back(nq, 0, p[5]);
  c.emplace_back(0, nq - 1, 1.0);
  return {Build(2 * nq, 2 * nq, e), Build(2 * nq, 2 * nq, a), Build(2 * nq, 1, b),
          Build(1, 2 * nq, c)};
}

AffineParamSystem BuildMsd(const MsdConfig &cfg)
{
  cfg.Validate();
  std::vector<Distribution> dists;
  for (double m : cfg.masses)
  {
    dists.push_back(Around(m, cfg.variation));
  }
  for (double k : cfg.springs)
  {
    dists.push_back(Around(k, cfg.variation));
  }
  for (double d : cfg.dampers)
  {
    dists.push_back(Around(d, cfg.variation));
  }
  return AffineFromAssembly(&AssembleMsd, std::move(dists));
}

void BpfConfig::Validate() const
{
  RequirePositive(capacitances, "capacitance");
  RequirePositive(inductances, "inductance");
  RequirePositive(losses, "loss conductance");
  if (!(source_conductance > 0.0) || !(load_conductance > 0.0))
  {
    throw std::invalid_argument("source and load conductances must be positive");
  }
  RequireVariation(variation);
}

LtiSystem AssembleBandpass(std::span<const double> p)
{
  if (p.size() != kBpfParams)
  {
    throw std::invalid_argument("band-pass model has 23 parameters");
  }
  const double *cap = p.data();
  const double *ind = p.data() + 7;
  const double *loss = p.data() + 14;
  const double gs = p[21], gl = p[22];

  // Unknowns: node voltages 0..14, inductor currents 15..21, source current 22.
  constexpr int num_nodes = 15;
  constexpr Index n = 23;
  constexpr Index source_row = 22;
  // Main nodes 0..4; internal node of each shunt tank; two internal nodes per series
  // branch.
  constexpr int shunt_node[4] = {1, 2, 3, 4};
  constexpr int shunt_internal[4] = {5, 6, 7, 8};
  constexpr int series_from[3] = {1, 2, 3};
  constexpr int series_to[3] = {2, 3, 4};
  constexpr int series_b[3] = {9, 11, 13};
  constexpr int series_c[3] = {10, 12, 14};

  std::vector<Triplet> e, a, b, c;
  // Inductor j runs from node `from` to node `to`. Symmetric MNA: KCL rows get -A_L and
  // the branch rows read -L di/dt = -A_L^T v, so E = diag(C, -L, 0) and A is symmetric.
  auto inductor = [&](int j, int from, int to)
  {
    const Index row = num_nodes + j;
    e.emplace_back(row, row, -ind[j]);
    if (from != kGround)
    {
      a.emplace_back(from, row, -1.0);
      a.emplace_back(row, from, -1.0);
    }
    if (to != kGround)
    {
      a.emplace_back(to, row, 1.0);
      a.emplace_back(row, to, 1.0);
    }
  };

  int shunt = 0, series = 0;
  for (int j = 0; j < 7; j++)
  {
    if (j % 2 == 0)
    {
      const int node = shunt_node[shunt], inner = shunt_internal[shunt];
      Stamp(e, 0, 0, node, kGround, cap[j]);
      Stamp(a, 0, 0, node, inner, -loss[j]);
      inductor(j, inner, kGround);
      shunt++;
    }
    else
    {
      const int from = series_from[series], to = series_to[series];
      const int nb = series_b[series], nc = series_c[series];
      Stamp(e, 0, 0, from, nb, cap[j]);
      Stamp(a, 0, 0, nb, nc, -loss[j]);
      inductor(j, nc, to);
      series++;
    }
  }
  Stamp(a, 0, 0, 0, 1, -gs);
  Stamp(a, 0, 0, 4, kGround, -gl);
  // Source current leaves node 0; the source row reads 0 = u - v0.
  a.emplace_back(0, source_row, -1.0);
  a.emplace_back(source_row, 0, -1.0);
  b.emplace_back(source_row, 0, 1.0);
  c.emplace_back(0, 4, 1.0);
  return {Build(n, n, e), Build(n, n, a), Build(n, 1, b), Build(1, n, c)};
}

AffineParamSystem BuildBandpass(const BpfConfig &cfg)
{
  cfg.Validate();
  std::vector<Distribution> dists;
  for (double v : cfg.capacitances)
  {
    dists.push_back(Around(v, cfg.variation));
  }
  for (double v : cfg.inductances)
  {
    dists.push_back(Around(v, cfg.variation));
  }
  for (double v : cfg.losses)
  {
    dists.push_back(Around(v, cfg.variation));
  }
  dists.push_back(Around(cfg.source_conductance, cfg.variation));
  dists.push_back(Around(cfg.load_conductance, cfg.variation));
  return AffineFromAssembly(&AssembleBandpass, std::move(dists));
}

}  // namespace sgmor
