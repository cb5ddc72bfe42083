// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_TYPES_HPP
#define SGMOR_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace sgmor
{

using Index = Eigen::Index;
using Complex = std::complex<double>;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

// Column-major storage throughout; Eigen's sparse direct solvers require it.
using SparseMatrix = Eigen::SparseMatrix<double>;
using ComplexSparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<double>;

// Raised when a numerical procedure cannot produce a trustworthy result: singular
// factorizations, unstable pencils handed to a Lyapunov solver, and the like.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A pencil (E, A) with det(sE - A) identically zero.
class SingularPencilError : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

}  // namespace sgmor

#endif  // SGMOR_TYPES_HPP
