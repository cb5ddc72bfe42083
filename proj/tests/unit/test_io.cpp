// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "sgmor/matrix_market.hpp"

using namespace sgmor;

TEST_CASE("coordinate round trip keeps every bit")
{
  testing::Gen g(6);
  Matrix D = g.Gaussian(7, 5);
  D(2, 3) = 0.0;
  D(0, 0) = 1.0 / 3.0;
  const SparseMatrix M = D.sparseView();
  std::stringstream ss;
  io::WriteMatrixMarket(ss, M);
  const SparseMatrix R = io::ParseMatrixMarket(ss);
  CHECK(R.rows() == 7);
  CHECK(R.cols() == 5);
  CHECK(Matrix(R) == D);
}

TEST_CASE("symmetric, skew, pattern and array storage")
{
  std::istringstream sym(
      "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 3\n1 1 2\n2 1 -1\n3 3 4\n");
  const Matrix S(io::ParseMatrixMarket(sym));
  CHECK(S(0, 1) == -1.0);
  CHECK(S(1, 0) == -1.0);
  CHECK(S(2, 2) == 4.0);

  std::istringstream skew(
      "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 5\n");
  const Matrix K(io::ParseMatrixMarket(skew));
  CHECK(K(1, 0) == 5.0);
  CHECK(K(0, 1) == -5.0);

  std::istringstream pat("%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 2\n2 1\n");
  const Matrix P(io::ParseMatrixMarket(pat));
  CHECK(P(0, 1) == 1.0);
  CHECK(P(0, 0) == 0.0);

  std::istringstream arr("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  const Matrix A(io::ParseMatrixMarket(arr));
  CHECK(A(1, 0) == 2.0);
  CHECK(A(0, 1) == 3.0);
}

TEST_CASE("malformed input raises FormatError")
{
  std::istringstream no_banner("3 3 1\n1 1 1\n");
  CHECK_THROWS_AS(io::ParseMatrixMarket(no_banner), io::FormatError);
  std::istringstream complex("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n");
  CHECK_THROWS_AS(io::ParseMatrixMarket(complex), io::FormatError);
  std::istringstream out_of_range("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n");
  CHECK_THROWS_AS(io::ParseMatrixMarket(out_of_range), io::FormatError);
  std::istringstream truncated("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n");
  CHECK_THROWS_AS(io::ParseMatrixMarket(truncated), io::FormatError);
}

TEST_CASE("system manifest round trip")
{
  testing::Gen g(8);
  const LtiSystem sys = g.SparseStable(12, 0.2);
  const auto dir = std::filesystem::temp_directory_path() / "sgmor_io_test";
  std::filesystem::remove_all(dir);
  const auto manifest = io::WriteSystem(sys, dir, "fom");
  CHECK(std::filesystem::exists(dir / "fom_E.mtx"));
  const LtiSystem back = io::ReadSystem(manifest);
  CHECK(Matrix(back.E) == Matrix(sys.E));
  CHECK(Matrix(back.A) == Matrix(sys.A));
  CHECK(Matrix(back.B) == Matrix(sys.B));
  CHECK(Matrix(back.C) == Matrix(sys.C));
  std::filesystem::remove_all(dir);
}
