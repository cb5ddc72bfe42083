// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include "sgmor/mor.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>
#include <Eigen/SparseLU>

namespace sgmor
{

ArnoldiResult Arnoldi(const SparseMatrix &E, const SparseMatrix &A, const SparseMatrix &B,
                      double s0, Index r_max)
{
  const Index n = A.rows();
  if (A.cols() != n || E.rows() != n || E.cols() != n || B.rows() != n)
  {
    throw std::invalid_argument("Arnoldi: inconsistent dimensions");
  }
  if (r_max < 1)
  {
    throw std::invalid_argument("Arnoldi: r_max must be positive");
  }
  const Index requested = r_max;
  r_max = std::min(r_max, n);

  const SparseMatrix K = s0 * E - A;
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success)
  {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Arnoldi: s0 E - A is singular at s0 = " << s0;
    throw NumericalError(msg.str());
  }
  auto apply = [&](const Vector &x) -> Vector
  {
    Vector y = lu.solve(x);
    if (!y.allFinite())
    {
      throw NumericalError("Arnoldi: non-finite solve with s0 E - A");
    }
    return y;
  };

  ArnoldiResult out;
  out.V.resize(n, r_max);
  std::deque<Vector> queue;
  const Matrix Bd(B);
  for (Index j = 0; j < Bd.cols(); j++)
  {
    queue.push_back(apply(Bd.col(j)));
  }
  Index r = 0;
  while (r < r_max && !queue.empty())
  {
    Vector w = std::move(queue.front());
    queue.pop_front();
    const double before = w.norm();
    for (int pass = 0; pass < 2; pass++)
    {
      for (Index k = 0; k < r; k++)
      {
        w -= out.V.col(k).dot(w) * out.V.col(k);
      }
    }
    const double after = w.norm();
    if (!(before > 0.0) || after < kBreakdownTolerance * before)
    {
      out.deflated++;
      continue;
    }
    out.V.col(r) = w / after;
    r++;
    if (r < r_max)
    {
      queue.push_back(apply(E * out.V.col(r - 1)));
    }
  }
  out.V.conservativeResize(n, r);
  out.rank = r;
  // Asking for more than n directions also counts.
  out.breakdown = r < requested;
  return out;
}

ProjectionPair ProjectionPair::Galerkin(Matrix V)
{
  ProjectionPair pair;
  pair.W = V;
  pair.V = std::move(V);
  return pair;
}

ProjectionPair ProjectionPair::Petrov(Matrix V, Matrix W)
{
  if (V.rows() != W.rows() || V.cols() != W.cols())
  {
    throw std::invalid_argument("projection pair: V and W must have equal shape");
  }
  return {std::move(V), std::move(W)};
}

ReducedSystem Reduce(const LtiSystem &fom, const ProjectionPair &pair, double expansion_point,
                     Technique technique)
{
  fom.Validate();
  const Matrix &V = pair.V;
  const Matrix &W = pair.W;
  if (V.rows() != fom.Order() || W.rows() != fom.Order() || V.cols() != W.cols())
  {
    throw std::invalid_argument("projection bases do not match the full-order model");
  }
  ReducedSystem out;
  out.expansion_point = expansion_point;
  out.technique = technique;
  const Matrix Wt = W.transpose();
  out.system.E = Wt * (fom.E * V);
  out.system.A = Wt * (fom.A * V);
  out.system.B = Wt * fom.B;
  out.system.C = fom.C * V;
  if (V.cols() > 0)
  {
    Eigen::JacobiSVD<Matrix> svd(out.system.E);
    const Vector sv = svd.singularValues();
    const double smax = sv(0), smin = sv(sv.size() - 1);
    if (!(smin > 1e-12 * smax))
    {
      std::ostringstream msg;
      msg << "reduced mass matrix is singular or ill-conditioned (cond " << smax / smin << ")";
      out.warnings.push_back(msg.str());
    }
  }
  return out;
}

Index StabilityReport::NumStable() const
{
  Index count = 0;
  for (const auto &row : rows)
  {
    count += row.stable ? 1 : 0;
  }
  return count;
}

Index StabilityReport::NumUnstable() const
{
  return static_cast<Index>(rows.size()) - NumStable();
}

std::string StabilityReport::ToCsv() const
{
  std::string out = "r,stable,abscissa,rel_h2_error\n";
  char buf[64];
  for (const auto &row : rows)
  {
    out += std::to_string(row.r);
    out += row.stable ? ",1," : ",0,";
    std::snprintf(buf, sizeof buf, "%.17g", row.abscissa);
    out += buf;
    out += ',';
    if (row.rel_h2_error)
    {
      std::snprintf(buf, sizeof buf, "%.17g", *row.rel_h2_error);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

StabilityReport StabilitySweep(const LtiSystem &fom, const Matrix &V,
                               const std::optional<Matrix> &W, std::span<const Index> r_list,
                               const FrequencyRule *rule, const FrequencySamples *reference)
{
  if (W && (W->rows() != V.rows() || W->cols() != V.cols()))
  {
    throw std::invalid_argument("stability sweep: W must have the shape of V");
  }
  for (std::size_t k = 0; k < r_list.size(); k++)
  {
    if (r_list[k] < 1 || r_list[k] > V.cols())
    {
      throw std::invalid_argument("stability sweep: r = " + std::to_string(r_list[k]) +
                                  " outside 1.." + std::to_string(V.cols()));
    }
    if (k > 0 && r_list[k] <= r_list[k - 1])
    {
      throw std::invalid_argument("stability sweep: r values must be strictly increasing");
    }
  }
  std::optional<FrequencySamples> fom_samples;
  if (rule && reference)
  {
    fom_samples = *reference;
  }
  else if (rule)
  {
    fom_samples = FrequencySamples::Sample(fom, *rule);
  }

  StabilityReport report;
  for (Index r : r_list)
  {
    StabilityRow row;
    row.r = r;
    bool have_spectrum = false;
    try
    {
      const Matrix Vr = V.leftCols(r);
      const ProjectionPair pair =
          W ? ProjectionPair::Petrov(Vr, W->leftCols(r)) : ProjectionPair::Galerkin(Vr);
      const ReducedSystem rom = Reduce(fom, pair);
      const PencilSpectrum spectrum = ComputePencilSpectrum(rom.system.E, rom.system.A);
      if (spectrum.finite.empty())
      {
        throw NumericalError("reduced pencil has no finite eigenvalues");
      }
      row.abscissa = spectrum.abscissa;
      row.stable = spectrum.abscissa < 0.0;
      have_spectrum = true;
      if (fom_samples)
      {
        row.rel_h2_error =
            H2RelativeError(*fom_samples, FrequencySamples::Sample(rom.system, *rule));
      }
    }
    catch (const std::exception &ex)
    {
      row.error = ex.what();
      if (!have_spectrum)
      {
        row.abscissa = std::numeric_limits<double>::quiet_NaN();
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace sgmor
