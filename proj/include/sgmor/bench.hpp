// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_BENCH_HPP
#define SGMOR_BENCH_HPP

#include <array>
#include <span>

#include "sgmor/systems.hpp"
#include "sgmor/types.hpp"

namespace sgmor
{

//
// Mass-spring-damper chain with five masses. Springs: ground-m1, m1-m2, m2-m3, m3-m4,
// m4-m5, m1-m3, m3-m5. Dampers: ground-m1, m1-m2, m2-m3, m3-m4, m4-m5. The input is a
// displacement of the bottom spring (force k1 u on m1), the output the position of m5.
// State x = (q, dq/dt), E = diag(I, M), A = [0 I; -K -D]. Parameters are ordered
// m1..m5, k1..k7, d1..d5 and vary uniformly by +-variation around the nominal values.
//
struct MsdConfig
{
  std::array<double, 5> masses{1.0, 1.0, 1.0, 1.0, 1.0};
  std::array<double, 7> springs{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  std::array<double, 5> dampers{0.07, 0.07, 0.07, 0.07, 0.07};
  double variation = 0.10;

  void Validate() const;
};

inline constexpr int kMsdParams = 17;
inline constexpr Index kMsdOrder = 10;

AffineParamSystem BuildMsd(const MsdConfig &cfg = {});

// Direct physical assembly at a parameter vector (m1..m5, k1..k7, d1..d5).
LtiSystem AssembleMsd(std::span<const double> params);

//
// Band-pass ladder of seven resonators (center frequency 1e5 rad/s, 50 Ohm terminations):
// shunt tanks at nodes 1..4 (C to ground in parallel with a loss conductance in series
// with L to ground) alternate with three series branches (C, loss conductance and L in
// series) between them. A voltage source drives node 0, which connects to node 1 through
// the source conductance; the load conductance sits at node 4 and the output is the load
// voltage. Modified nodal analysis gives 15 node voltages, 7 inductor currents and the
// source current (n = 23); the conductance-only nodes and the source make it an
// index-1 DAE. The MNA form is the symmetric one, E = diag(C, -L, 0) with A = A^T, so a
// one-sided projection does not inherit stability. Parameters are ordered C1..C7, L1..L7,
// G1..G7 (losses), Gs, Gl, in SI units.
//
struct BpfConfig
{
  std::array<double, 7> capacitances{2e-7, 2e-7, 2e-7, 2e-7, 2e-7, 2e-7, 2e-7};
  std::array<double, 7> inductances{5e-4, 5e-4, 5e-4, 5e-4, 5e-4, 5e-4, 5e-4};
  std::array<double, 7> losses{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  double source_conductance = 0.02;
  double load_conductance = 0.02;
  double variation = 0.20;

  void Validate() const;
};

inline constexpr int kBpfParams = 23;
inline constexpr Index kBpfOrder = 23;

AffineParamSystem BuildBandpass(const BpfConfig &cfg = {});
LtiSystem AssembleBandpass(std::span<const double> params);

}  // namespace sgmor

#endif  // SGMOR_BENCH_HPP
