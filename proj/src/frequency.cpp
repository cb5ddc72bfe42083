// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include "sgmor/frequency.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sgmor/linalg.hpp"

namespace sgmor
{

FrequencyRule FrequencyRule::GaussLegendre(int num_nodes, double scale)
{
  if (num_nodes < 1)
  {
    throw std::invalid_argument("frequency rule needs at least one node");
  }
  if (!(scale > 0.0))
  {
    throw std::invalid_argument("frequency scale must be positive");
  }
  const QuadratureRule gl = GaussRule(DistributionKind::uniform, num_nodes);
  FrequencyRule rule;
  rule.num_nodes = num_nodes;
  rule.scale = scale;
  rule.thetas.resize(num_nodes);
  rule.theta_weights.resize(num_nodes);
  for (int k = 0; k < num_nodes; k++)
  {
    // Probability weights on [-1, 1] times the interval length pi.
    rule.thetas[k] = 0.5 * std::numbers::pi * gl.nodes(0, k);
    rule.theta_weights[k] = std::numbers::pi * gl.weights(k);
  }
  for (int k = num_nodes / 2; k < num_nodes; k++)
  {
    const double t = std::tan(rule.thetas[k]);
    const double composite = rule.theta_weights[k] * scale * (1.0 + t * t);
    const bool center = (num_nodes % 2 == 1) && k == num_nodes / 2;
    rule.omegas.push_back(center ? 0.0 : scale * t);
    rule.folded_weights.push_back((center ? 1.0 : 2.0) * composite / (2.0 * std::numbers::pi));
  }
  return rule;
}

std::vector<double> FrequencyRule::ThetaNodes() const
{
  return thetas;
}

std::vector<double> FrequencyRule::SymmetricOmegas() const
{
  std::vector<double> out(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); k++)
  {
    out[k] = scale * std::tan(thetas[k]);
  }
  if (num_nodes % 2 == 1)
  {
    out[num_nodes / 2] = 0.0;
  }
  return out;
}

std::vector<double> FrequencyRule::CompositeWeights() const
{
  std::vector<double> out(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); k++)
  {
    const double t = std::tan(thetas[k]);
    out[k] = theta_weights[k] * scale * (1.0 + t * t);
  }
  return out;
}

FrequencySamples FrequencySamples::Sample(const LtiSystem &sys, const FrequencyRule &rule)
{
  sys.Validate();
  FrequencySamples out;
  out.rule = rule;
  out.values.reserve(rule.Omegas().size());
  linalg::ShiftedSolver solver(sys.E, sys.A);
  const ComplexMatrix B = Matrix(sys.B).cast<Complex>();
  const ComplexSparseMatrix C = sys.C.cast<Complex>();
  for (double omega : rule.Omegas())
  {
    solver.Factorize({0.0, omega});
    out.values.push_back(C * solver.Solve(B));
  }
  return out;
}

FrequencySamples FrequencySamples::Sample(const DenseLtiSystem &sys, const FrequencyRule &rule)
{
  FrequencySamples out;
  out.rule = rule;
  out.values.reserve(rule.Omegas().size());
  for (double omega : rule.Omegas())
  {
    out.values.push_back(EvaluateTransfer(sys, {0.0, omega}));
  }
  return out;
}

double FrequencySamples::H2Norm() const
{
  const auto &w = rule.FoldedWeights();
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); j++)
  {
    sum += w[j] * values[j].squaredNorm();
  }
  return std::sqrt(sum);
}

double FrequencySamples::H2Distance(const FrequencySamples &other) const
{
  if (other.values.size() != values.size() || other.rule.Scale() != rule.Scale() ||
      other.rule.NumNodes() != rule.NumNodes())
  {
    throw std::invalid_argument("H2 distance needs samples on the same frequency rule");
  }
  const auto &w = rule.FoldedWeights();
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); j++)
  {
    if (values[j].rows() != other.values[j].rows() || values[j].cols() != other.values[j].cols())
    {
      throw std::invalid_argument("H2 distance needs equal input and output counts");
    }
    sum += w[j] * (values[j] - other.values[j]).squaredNorm();
  }
  return std::sqrt(sum);
}

double FrequencySamples::TailFraction() const
{
  if (values.empty())
  {
    return 0.0;
  }
  const double norm2 = H2Norm() * H2Norm();
  const double last = values.back().squaredNorm() * rule.Omegas().back();
  if (norm2 == 0.0)
  {
    return last == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return last / (std::numbers::pi * norm2);
}

double H2Norm(const LtiSystem &sys, const FrequencyRule &rule)
{
  return FrequencySamples::Sample(sys, rule).H2Norm();
}

double H2Norm(const DenseLtiSystem &sys, const FrequencyRule &rule)
{
  return FrequencySamples::Sample(sys, rule).H2Norm();
}

namespace
{

template <typename System>
H2Estimate EstimateH2NormImpl(const System &sys, const H2Options &opts)
{
  if (opts.initial_nodes < 1 || opts.max_nodes < opts.initial_nodes)
  {
    throw std::invalid_argument("H2 estimate: need 1 <= initial_nodes <= max_nodes");
  }
  H2Estimate est;
  int nodes = opts.initial_nodes;
  auto samples = FrequencySamples::Sample(sys, FrequencyRule::GaussLegendre(nodes, opts.scale));
  double value = samples.H2Norm();
  while (true)
  {
    est.value = value;
    est.nodes = nodes;
    est.tail_fraction = samples.TailFraction();
    if (2 * nodes > opts.max_nodes)
    {
      break;
    }
    nodes *= 2;
    samples = FrequencySamples::Sample(sys, FrequencyRule::GaussLegendre(nodes, opts.scale));
    const double next = samples.H2Norm();
    const double change = std::abs(next - value) / std::max(std::abs(next), 1e-300);
    value = next;
    if (change < opts.rtol || next == 0.0)
    {
      est.value = value;
      est.nodes = nodes;
      est.tail_fraction = samples.TailFraction();
      est.converged = true;
      break;
    }
  }
  est.possibly_infinite = est.tail_fraction > opts.tail_tol;
  if (est.possibly_infinite)
  {
    est.converged = false;
  }
  return est;
}

}  // namespace

H2Estimate EstimateH2Norm(const LtiSystem &sys, const H2Options &opts)
{
  return EstimateH2NormImpl(sys, opts);
}

H2Estimate EstimateH2Norm(const DenseLtiSystem &sys, const H2Options &opts)
{
  return EstimateH2NormImpl(sys, opts);
}

double H2RelativeError(const FrequencySamples &fom, const FrequencySamples &rom)
{
  const double norm = fom.H2Norm();
  if (norm == 0.0)
  {
    throw std::domain_error("relative H2 error undefined: full-order H2 norm is zero");
  }
  return fom.H2Distance(rom) / norm;
}

double H2RelativeError(const LtiSystem &fom, const DenseLtiSystem &rom,
                       const FrequencyRule &rule)
{
  return H2RelativeError(FrequencySamples::Sample(fom, rule),
                         FrequencySamples::Sample(rom, rule));
}

double H2RelativeError(const LtiSystem &fom, const LtiSystem &rom, const FrequencyRule &rule)
{
  return H2RelativeError(FrequencySamples::Sample(fom, rule),
                         FrequencySamples::Sample(rom, rule));
}

}  // namespace sgmor
