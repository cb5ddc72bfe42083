// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include "sgmor/systems.hpp"
#include "sgmor/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseLU>

namespace sgmor
{

namespace
{

template <typename System>
void ValidateDimensions(const System &sys)
{
  const Index n = sys.A.rows();
  if (sys.A.cols() != n || sys.E.rows() != n || sys.E.cols() != n)
  {
    throw std::invalid_argument("E and A must be square of equal size");
  }
  if (sys.B.rows() != n)
  {
    throw std::invalid_argument("B must have " + std::to_string(n) + " rows");
  }
  if (sys.C.cols() != n)
  {
    throw std::invalid_argument("C must have " + std::to_string(n) + " columns");
  }
}

std::string FormatComplex(Complex s)
{
  std::ostringstream out;
  out.precision(17);
  out << s.real() << (s.imag() < 0 ? "-" : "+") << std::abs(s.imag()) << "i";
  return out.str();
}

}  // namespace

void LtiSystem::Validate() const
{
  ValidateDimensions(*this);
}

void DenseLtiSystem::Validate() const
{
  ValidateDimensions(*this);
}

DenseLtiSystem ToDense(const LtiSystem &sys)
{
  return {Matrix(sys.E), Matrix(sys.A), Matrix(sys.B), Matrix(sys.C)};
}

LtiSystem ToSparse(const DenseLtiSystem &sys)
{
  return {sys.E.sparseView(), sys.A.sparseView(), sys.B.sparseView(), sys.C.sparseView()};
}

AffineParamSystem::AffineParamSystem(std::vector<LtiSystem> terms_,
                                     std::vector<Distribution> dists_)
  : terms(std::move(terms_)), dists(std::move(dists_))
{
  if (terms.size() != dists.size() + 1)
  {
    throw std::invalid_argument("affine system needs q+1 terms for q distributions");
  }
  for (const auto &term : terms)
  {
    term.Validate();
    if (term.Order() != Order() || term.NumInputs() != NumInputs() ||
        term.NumOutputs() != NumOutputs())
    {
      throw std::invalid_argument("affine terms must share n, n_in and n_out");
    }
  }
}

Vector AffineParamSystem::Mean() const
{
  Vector mu(NumParams());
  for (int l = 0; l < NumParams(); l++)
  {
    mu(l) = dists[l].Mean();
  }
  return mu;
}

LtiSystem AffineParamSystem::Evaluate(std::span<const double> mu) const
{
  if (static_cast<int>(mu.size()) != NumParams())
  {
    throw std::invalid_argument("parameter vector has length " + std::to_string(mu.size()) +
                                ", system has " + std::to_string(NumParams()) + " parameters");
  }
  LtiSystem out = terms.front();
  for (int l = 1; l <= NumParams(); l++)
  {
    const double c = mu[l - 1];
    out.E += c * terms[l].E;
    out.A += c * terms[l].A;
    out.B += c * terms[l].B;
    out.C += c * terms[l].C;
  }
  return out;
}

AffineParamSystem AffineParamSystem::WithDistributions(std::vector<Distribution> new_dists) const
{
  return AffineParamSystem(terms, std::move(new_dists));
}

PencilSpectrum ComputePencilSpectrum(const Matrix &E, const Matrix &A)
{
  if (E.rows() != E.cols() || A.rows() != A.cols() || E.rows() != A.rows())
  {
    throw std::invalid_argument("pencil matrices must be square of equal size");
  }
  PencilSpectrum out{{}, -std::numeric_limits<double>::infinity(), false};
  if (A.rows() == 0)
  {
    return out;
  }
  Eigen::GeneralizedEigenSolver<Matrix> qz(A, E, false);
  if (qz.info() != Eigen::Success)
  {
    throw NumericalError("QZ iteration did not converge");
  }
  const double eps = std::numeric_limits<double>::epsilon() * static_cast<double>(A.rows());
  const double e_tol = eps * E.norm();
  const double a_tol = eps * A.norm();
  const auto alphas = qz.alphas();
  const auto betas = qz.betas();
  bool checked_regular = false;
  for (Index k = 0; k < alphas.size(); k++)
  {
    const double b = std::abs(betas(k));
    if (b <= e_tol)
    {
      if (std::abs(alphas(k)) <= a_tol && !checked_regular)
      {
        // QZ cannot tell a singular pencil from one with tiny alpha and beta; a regular
        // pencil has a nonsingular sE - A at almost every shift.
        const double scale = E.norm() + A.norm();
        bool singular = true;
        for (const double s : {0.7548776662466927, -1.3247179572447460})
        {
          const Matrix P = s * E - A;
          if (Eigen::PartialPivLU<Matrix>(P).rcond() > eps * scale / P.norm())
          {
            singular = false;
            break;
          }
        }
        if (singular)
        {
          throw SingularPencilError("singular pencil: det(sE - A) vanishes identically");
        }
        checked_regular = true;
      }
      out.has_infinite = true;
      continue;
    }
    const Complex lambda = alphas(k) / betas(k);
    out.finite.push_back(lambda);
    out.abscissa = std::max(out.abscissa, lambda.real());
  }
  return out;
}

PencilSpectrum ComputePencilSpectrum(const SparseMatrix &E, const SparseMatrix &A)
{
  return ComputePencilSpectrum(Matrix(E), Matrix(A));
}

bool IsAsymptoticallyStable(const Matrix &E, const Matrix &A, double tol)
{
  const PencilSpectrum spectrum = ComputePencilSpectrum(E, A);
  if (spectrum.finite.empty())
  {
    throw NumericalError("pencil has no finite eigenvalues");
  }
  return spectrum.abscissa < -tol;
}

bool IsAsymptoticallyStable(const SparseMatrix &E, const SparseMatrix &A, double tol)
{
  return IsAsymptoticallyStable(Matrix(E), Matrix(A), tol);
}

std::string DissipativityReport::Describe() const
{
  if (Dissipative())
  {
    return "dissipative";
  }
  std::string out;
  auto append = [&out](const std::string &s) { out += (out.empty() ? "" : "; ") + s; };
  if (!e_symmetric)
  {
    append("E is not symmetric");
  }
  if (!e_positive_definite)
  {
    append("E is not positive definite (min eigenvalue " + std::to_string(e_min_eigenvalue) +
           ")");
  }
  if (!sym_a_negative_definite)
  {
    append("A + A^T is not negative definite (max eigenvalue " +
           std::to_string(sym_a_max_eigenvalue) + ")");
  }
  return out;
}

DissipativityReport CheckDissipative(const Matrix &E, const Matrix &A, double tol)
{
  if (E.rows() != E.cols() || A.rows() != A.cols() || E.rows() != A.rows())
  {
    throw std::invalid_argument("dissipativity check needs square matrices of equal size");
  }
  DissipativityReport report;
  if (A.rows() == 0)
  {
    return report;
  }
  const Matrix Esym = 0.5 * (E + E.transpose());
  report.e_symmetric = (E - E.transpose()).norm() <= tol * E.norm();

  Eigen::SelfAdjointEigenSolver<Matrix> eig_e(Esym, Eigen::EigenvaluesOnly);
  const Vector ev_e = eig_e.eigenvalues();
  const double norm_e = std::max(std::abs(ev_e(0)), std::abs(ev_e(ev_e.size() - 1)));
  report.e_min_eigenvalue = ev_e(0);
  report.e_positive_definite = ev_e(0) > tol * norm_e;

  const Matrix S = A + A.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig_s(S, Eigen::EigenvaluesOnly);
  const Vector ev_s = eig_s.eigenvalues();
  const double norm_s = std::max(std::abs(ev_s(0)), std::abs(ev_s(ev_s.size() - 1)));
  report.sym_a_max_eigenvalue = ev_s(ev_s.size() - 1);
  report.sym_a_negative_definite = norm_s > 0.0 && ev_s(ev_s.size() - 1) < -tol * norm_s;
  return report;
}

DissipativityReport CheckDissipative(const SparseMatrix &E, const SparseMatrix &A, double tol)
{
  if (A.rows() < linalg::kDenseEigenThreshold)
  {
    return CheckDissipative(Matrix(E), Matrix(A), tol);
  }
  if (E.rows() != E.cols() || A.rows() != A.cols() || E.rows() != A.rows())
  {
    throw std::invalid_argument("dissipativity check needs square matrices of equal size");
  }
  // Extreme eigenvalues by Lanczos on S and -S.
  DissipativityReport report;
  const SparseMatrix Et = E.transpose();
  report.e_symmetric = SparseMatrix(E - Et).norm() <= tol * E.norm();
  const SparseMatrix Esym = 0.5 * (E + Et);
  const double e_max = linalg::LanczosLargestEigenvalue(Esym);
  const double e_min = -linalg::LanczosLargestEigenvalue(-Esym);
  report.e_min_eigenvalue = e_min;
  report.e_positive_definite = e_min > tol * std::max(std::abs(e_min), std::abs(e_max));

  const SparseMatrix S = A + SparseMatrix(A.transpose());
  const double s_max = linalg::LanczosLargestEigenvalue(S);
  const double s_min = -linalg::LanczosLargestEigenvalue(-S);
  const double norm_s = std::max(std::abs(s_min), std::abs(s_max));
  report.sym_a_max_eigenvalue = s_max;
  report.sym_a_negative_definite = norm_s > 0.0 && s_max < -tol * norm_s;
  return report;
}

ComplexMatrix EvaluateTransfer(const LtiSystem &sys, Complex s)
{
  sys.Validate();
  const ComplexSparseMatrix K = s * sys.E.cast<Complex>() - sys.A.cast<Complex>();
  Eigen::SparseLU<ComplexSparseMatrix> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success)
  {
    throw NumericalError("sE - A is singular at s = " + FormatComplex(s));
  }
  const ComplexMatrix X = lu.solve(ComplexMatrix(sys.B.cast<Complex>()));
  if (!X.allFinite())
  {
    throw NumericalError("sE - A is singular at s = " + FormatComplex(s));
  }
  return sys.C.cast<Complex>() * X;
}

ComplexMatrix EvaluateTransfer(const DenseLtiSystem &sys, Complex s)
{
  sys.Validate();
  const ComplexMatrix K = s * sys.E.cast<Complex>() - sys.A.cast<Complex>();
  Eigen::PartialPivLU<ComplexMatrix> lu(K);
  if (!(lu.rcond() > 10.0 * std::numeric_limits<double>::epsilon()))
  {
    throw NumericalError("sE - A is singular at s = " + FormatComplex(s));
  }
  const ComplexMatrix X = lu.solve(sys.B.cast<Complex>());
  if (!X.allFinite())
  {
    throw NumericalError("sE - A is singular at s = " + FormatComplex(s));
  }
  return sys.C.cast<Complex>() * X;
}

double OutputErrorBound(double relative_h2_error, double fom_h2_norm, double input_l2_norm)
{
  return relative_h2_error * fom_h2_norm * input_l2_norm;
}

}  // namespace sgmor
