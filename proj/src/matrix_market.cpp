// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include "sgmor/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace sgmor::io
{

namespace
{

std::string Lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void Fail(std::size_t line, const std::string &what)
{
  throw FormatError("Matrix Market line " + std::to_string(line) + ": " + what);
}

}  // namespace

SparseMatrix ParseMatrixMarket(std::istream &in)
{
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
  {
    throw FormatError("Matrix Market: empty input");
  }
  line_no++;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || Lower(object) != "matrix")
  {
    Fail(line_no, "missing '%%MatrixMarket matrix' banner");
  }
  format = Lower(format);
  field = Lower(field);
  symmetry = Lower(symmetry);
  if (format != "coordinate" && format != "array")
  {
    Fail(line_no, "unsupported format '" + format + "'");
  }
  if (field != "real" && field != "integer" && field != "pattern" && field != "double")
  {
    Fail(line_no, "unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
  {
    Fail(line_no, "unsupported symmetry '" + symmetry + "'");
  }
  if (format == "array" && field == "pattern")
  {
    Fail(line_no, "pattern field requires coordinate format");
  }
  const bool symmetric = symmetry == "symmetric";
  const bool skew = symmetry == "skew-symmetric";

  // Size line, after comments.
  while (std::getline(in, line))
  {
    line_no++;
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] != '%')
    {
      break;
    }
    line.clear();
  }
  if (line.empty())
  {
    Fail(line_no, "missing size line");
  }
  std::istringstream size_line(line);
  long long rows = -1, cols = -1, nnz = -1;
  size_line >> rows >> cols;
  if (format == "coordinate")
  {
    size_line >> nnz;
  }
  else
  {
    nnz = (symmetric || skew) ? (skew ? rows * (rows - 1) / 2 : rows * (rows + 1) / 2)
                              : rows * cols;
  }
  if (!size_line || rows < 0 || cols < 0 || nnz < 0)
  {
    Fail(line_no, "malformed size line");
  }
  if ((symmetric || skew) && rows != cols)
  {
    Fail(line_no, "symmetric storage requires a square matrix");
  }

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(symmetric || skew ? 2 * nnz : nnz));
  auto add = [&](long long i, long long j, double v)
  {
    if (i < 0 || i >= rows || j < 0 || j >= cols)
    {
      Fail(line_no, "index out of range");
    }
    entries.emplace_back(i, j, v);
    if (i != j && symmetric)
    {
      entries.emplace_back(j, i, v);
    }
    else if (i != j && skew)
    {
      entries.emplace_back(j, i, -v);
    }
    else if (i == j && skew)
    {
      Fail(line_no, "skew-symmetric matrix with a diagonal entry");
    }
  };

  long long read = 0;
  long long array_pos = 0;
  while (read < nnz && std::getline(in, line))
  {
    line_no++;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%')
    {
      continue;
    }
    std::istringstream entry(line);
    if (format == "coordinate")
    {
      long long i, j;
      double v = 1.0;
      entry >> i >> j;
      if (field != "pattern")
      {
        entry >> v;
      }
      if (!entry)
      {
        Fail(line_no, "malformed entry");
      }
      add(i - 1, j - 1, v);
    }
    else
    {
      double v;
      entry >> v;
      if (!entry)
      {
        Fail(line_no, "malformed entry");
      }
      // Column-major; symmetric storage lists the lower triangle only.
      long long i, j;
      if (symmetric || skew)
      {
        const long long offset = skew ? 1 : 0;
        j = 0;
        long long pos = array_pos;
        while (pos >= rows - j - offset)
        {
          pos -= rows - j - offset;
          j++;
        }
        i = j + offset + pos;
      }
      else
      {
        i = array_pos % rows;
        j = array_pos / rows;
      }
      array_pos++;
      if (v != 0.0)
      {
        add(i, j, v);
      }
    }
    read++;
  }
  if (read < nnz)
  {
    Fail(line_no, "expected " + std::to_string(nnz) + " entries, found " +
                      std::to_string(read));
  }
  SparseMatrix M(rows, cols);
  M.setFromTriplets(entries.begin(), entries.end());
  return M;
}

SparseMatrix ReadMatrixMarket(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open " + path.string());
  }
  try
  {
    return ParseMatrixMarket(in);
  }
  catch (const FormatError &ex)
  {
    throw FormatError(path.string() + ": " + ex.what());
  }
}

void WriteMatrixMarket(std::ostream &out, const SparseMatrix &M)
{
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << M.rows() << ' ' << M.cols() << ' ' << M.nonZeros() << '\n';
  char buf[64];
  for (Index k = 0; k < M.outerSize(); k++)
  {
    for (SparseMatrix::InnerIterator it(M, k); it; ++it)
    {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << buf << '\n';
    }
  }
}

void WriteMatrixMarket(const std::filesystem::path &path, const SparseMatrix &M)
{
  std::ofstream out(path);
  if (!out)
  {
    throw std::runtime_error("cannot write " + path.string());
  }
  WriteMatrixMarket(out, M);
  if (!out)
  {
    throw std::runtime_error("error writing " + path.string());
  }
}

std::filesystem::path WriteSystem(const LtiSystem &sys, const std::filesystem::path &dir,
                                  const std::string &stem)
{
  sys.Validate();
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["n"] = sys.Order();
  manifest["n_in"] = sys.NumInputs();
  manifest["n_out"] = sys.NumOutputs();
  const std::pair<const char *, const SparseMatrix *> parts[] = {
      {"E", &sys.E}, {"A", &sys.A}, {"B", &sys.B}, {"C", &sys.C}};
  for (const auto &[name, M] : parts)
  {
    const std::string file = stem + "_" + name + ".mtx";
    WriteMatrixMarket(dir / file, *M);
    manifest[name] = file;
  }
  const auto path = dir / (stem + ".json");
  std::ofstream out(path);
  if (!out)
  {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << manifest.dump(2) << '\n';
  return path;
}

LtiSystem ReadSystem(const std::filesystem::path &manifest_path)
{
  std::ifstream in(manifest_path);
  if (!in)
  {
    throw std::runtime_error("cannot open " + manifest_path.string());
  }
  nlohmann::json manifest;
  try
  {
    manifest = nlohmann::json::parse(in);
  }
  catch (const nlohmann::json::exception &ex)
  {
    throw FormatError(manifest_path.string() + ": " + ex.what());
  }
  const auto dir = manifest_path.parent_path();
  LtiSystem sys;
  try
  {
    sys.E = ReadMatrixMarket(dir / manifest.at("E").get<std::string>());
    sys.A = ReadMatrixMarket(dir / manifest.at("A").get<std::string>());
    sys.B = ReadMatrixMarket(dir / manifest.at("B").get<std::string>());
    sys.C = ReadMatrixMarket(dir / manifest.at("C").get<std::string>());
    sys.Validate();
    if (sys.Order() != manifest.at("n").get<Index>() ||
        sys.NumInputs() != manifest.at("n_in").get<Index>() ||
        sys.NumOutputs() != manifest.at("n_out").get<Index>())
    {
      throw FormatError(manifest_path.string() + ": sizes disagree with the matrix files");
    }
  }
  catch (const nlohmann::json::exception &ex)
  {
    throw FormatError(manifest_path.string() + ": " + ex.what());
  }
  return sys;
}

}  // namespace sgmor::io
