// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_FREQUENCY_HPP
#define SGMOR_FREQUENCY_HPP

#include <vector>

#include "sgmor/systems.hpp"
#include "sgmor/types.hpp"

namespace sgmor
{

//
// Quadrature for (1/2pi) * integral over the real omega axis. The axis is mapped to
// theta in (-pi/2, pi/2) by omega = scale * tan(theta) and Gauss-Legendre nodes are placed
// in theta; the Jacobian scale * (1 + tan^2) is folded into the weights.
//
// Integrands of interest satisfy g(-omega) = conj(g(omega)), so only the nodes with
// omega >= 0 are stored. Their folded weights already include the 1/(2pi) factor and the
// doubling of the mirrored node; the integral is sum_j w_j Re g(omega_j).
//
class FrequencyRule
{
public:
  static FrequencyRule GaussLegendre(int num_nodes, double scale = 1.0);

  int NumNodes() const { return num_nodes; }
  double Scale() const { return scale; }

  const std::vector<double> &Omegas() const { return omegas; }
  const std::vector<double> &FoldedWeights() const { return folded_weights; }

  // Full symmetric rule: theta nodes, omega nodes and composite weights
  // w_theta * scale * (1 + tan^2(theta)) (without the 1/(2pi) factor).
  std::vector<double> ThetaNodes() const;
  std::vector<double> SymmetricOmegas() const;
  std::vector<double> CompositeWeights() const;

private:
  int num_nodes = 0;
  double scale = 1.0;
  std::vector<double> thetas;       // all nodes, ascending
  std::vector<double> theta_weights;
  std::vector<double> omegas;       // omega >= 0 half
  std::vector<double> folded_weights;
};

inline constexpr int kDefaultH2Nodes = 200;
inline constexpr int kMaxH2Nodes = 1600;

// Transfer function samples H(i omega_j) on the non-negative nodes of a rule.
class FrequencySamples
{
public:
  static FrequencySamples Sample(const LtiSystem &sys, const FrequencyRule &rule);
  static FrequencySamples Sample(const DenseLtiSystem &sys, const FrequencyRule &rule);

  const FrequencyRule &Rule() const { return rule; }
  const std::vector<ComplexMatrix> &Values() const { return values; }

  // sqrt((1/2pi) int ||H||_F^2) by the rule.
  double H2Norm() const;
  // ||H - G||_H2 for samples on the same rule.
  double H2Distance(const FrequencySamples &other) const;
  // Outermost-node tail indicator omega_max ||H(i omega_max)||_F^2 / (pi ||H||^2): of
  // order one when the integrand does not decay (infinite H2 norm).
  double TailFraction() const;

private:
  FrequencyRule rule;
  std::vector<ComplexMatrix> values;
};

double H2Norm(const LtiSystem &sys, const FrequencyRule &rule);
double H2Norm(const DenseLtiSystem &sys, const FrequencyRule &rule);

struct H2Options
{
  int initial_nodes = kDefaultH2Nodes;
  int max_nodes = kMaxH2Nodes;
  double rtol = 1e-6;
  double scale = 1.0;
  // Tail fraction above which the norm is reported as possibly infinite.
  double tail_tol = 1e-2;
};

struct H2Estimate
{
  double value = 0.0;
  int nodes = 0;
  bool converged = false;
  bool possibly_infinite = false;
  double tail_fraction = 0.0;
};

// Doubles the node count until the relative change drops below rtol or max_nodes is hit.
H2Estimate EstimateH2Norm(const LtiSystem &sys, const H2Options &opts = {});
H2Estimate EstimateH2Norm(const DenseLtiSystem &sys, const H2Options &opts = {});

// ||H - H_r||_H2 / ||H||_H2 on a shared rule. Throws if ||H||_H2 vanishes.
double H2RelativeError(const LtiSystem &fom, const DenseLtiSystem &rom,
                       const FrequencyRule &rule);
double H2RelativeError(const LtiSystem &fom, const LtiSystem &rom, const FrequencyRule &rule);
double H2RelativeError(const FrequencySamples &fom, const FrequencySamples &rom);

}  // namespace sgmor

#endif  // SGMOR_FREQUENCY_HPP
