// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_MATRIX_MARKET_HPP
#define SGMOR_MATRIX_MARKET_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "sgmor/systems.hpp"
#include "sgmor/types.hpp"

namespace sgmor::io
{

class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Reads "matrix coordinate" and "matrix array" files with real, integer or pattern
// values and general, symmetric or skew-symmetric storage.
SparseMatrix ParseMatrixMarket(std::istream &in);
SparseMatrix ReadMatrixMarket(const std::filesystem::path &path);

// Writes coordinate real general format with 17 significant digits.
void WriteMatrixMarket(std::ostream &out, const SparseMatrix &M);
void WriteMatrixMarket(const std::filesystem::path &path, const SparseMatrix &M);

// Writes <stem>_E.mtx, <stem>_A.mtx, <stem>_B.mtx, <stem>_C.mtx and a manifest
// <stem>.json naming them with n, n_in and n_out. Returns the manifest path.
std::filesystem::path WriteSystem(const LtiSystem &sys, const std::filesystem::path &dir,
                                  const std::string &stem);
LtiSystem ReadSystem(const std::filesystem::path &manifest);

}  // namespace sgmor::io

#endif  // SGMOR_MATRIX_MARKET_HPP
