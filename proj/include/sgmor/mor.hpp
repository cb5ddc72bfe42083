// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_MOR_HPP
#define SGMOR_MOR_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgmor/frequency.hpp"
#include "sgmor/stabilize.hpp"
#include "sgmor/systems.hpp"
#include "sgmor/types.hpp"

namespace sgmor
{

// New Krylov directions whose norm drops below this fraction of their norm before
// orthogonalization are treated as linearly dependent.
inline constexpr double kBreakdownTolerance = 1e-13;

struct ArnoldiResult
{
  Matrix V;            // n x rank, orthonormal columns
  Index rank = 0;
  bool breakdown = false;   // rank < r_max
  Index deflated = 0;       // candidate directions dropped as dependent
};

// Orthonormal basis of the block Krylov space K_r((s0 E - A)^{-1} E, (s0 E - A)^{-1} B).
// Candidate directions are processed first-in first-out, so for a single input this is
// the standard Arnoldi recurrence. Modified Gram-Schmidt with one reorthogonalization
// pass; one sparse LU of s0 E - A is reused throughout.
ArnoldiResult Arnoldi(const SparseMatrix &E, const SparseMatrix &A, const SparseMatrix &B,
                      double s0, Index r_max);

struct ProjectionPair
{
  Matrix V;
  Matrix W;

  static ProjectionPair Galerkin(Matrix V);
  // Throws std::invalid_argument on mismatched sizes.
  static ProjectionPair Petrov(Matrix V, Matrix W);
  Index Rank() const { return V.cols(); }
};

struct ReducedSystem
{
  DenseLtiSystem system;
  double expansion_point = 0.0;
  Technique technique = Technique::none;
  std::vector<std::string> warnings;
};

// E_r = W^T E V, A_r = W^T A V, B_r = W^T B, C_r = C V. A warning is recorded when E_r is
// ill-conditioned.
ReducedSystem Reduce(const LtiSystem &fom, const ProjectionPair &pair,
                     double expansion_point = 0.0, Technique technique = Technique::none);

struct StabilityRow
{
  Index r = 0;
  bool stable = false;
  double abscissa = 0.0;
  std::optional<double> rel_h2_error;
  std::string error;   // empty unless this row failed
};

struct StabilityReport
{
  std::vector<StabilityRow> rows;

  Index NumStable() const;
  Index NumUnstable() const;
  // Header r,stable,abscissa,rel_h2_error; an empty field marks a missing error value.
  std::string ToCsv() const;
};

// For each r, reduce with the leading r columns of V (and W, or V if W is absent), test
// stability of the reduced pencil and, when a frequency rule is given, compute the
// relative H2 error against the full model. `reference` replaces the full-model samples
// when the error is measured against a different system (it must use `rule`).
// Failures are recorded per row.
StabilityReport StabilitySweep(const LtiSystem &fom, const Matrix &V,
                               const std::optional<Matrix> &W, std::span<const Index> r_list,
                               const FrequencyRule *rule = nullptr,
                               const FrequencySamples *reference = nullptr);

}  // namespace sgmor

#endif  // SGMOR_MOR_HPP
