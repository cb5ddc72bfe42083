// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SGMOR_EXPERIMENT_HPP
#define SGMOR_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "sgmor/mor.hpp"
#include "sgmor/stabilize.hpp"

namespace sgmor
{

enum class Model
{
  msd,
  bpf
};

enum class QuadratureKind
{
  tensor,
  monte_carlo
};

// How technique i obtains M: frequency integrals (sparse, one LU per node) or the dense
// direct Lyapunov solver.
enum class LyapunovMethod
{
  frequency,
  direct
};

//
// Pipeline configuration. JSON keys match the field names; unknown keys are rejected.
//
struct RunConfig
{
  Model model = Model::msd;
  int degree = 1;
  Technique technique = Technique::none;
  std::optional<double> expansion_point;   // model default if absent
  Index r_min = 1;
  Index r_max = 30;
  int freq_nodes = 64;        // technique i
  std::optional<LyapunovMethod> lyapunov;   // technique i; model default if absent
  std::optional<double> frequency_scale;    // omega = scale tan(theta); model default
  int h2_nodes = 200;         // error evaluation
  bool compute_h2 = true;
  QuadratureKind quadrature = QuadratureKind::monte_carlo;   // technique ii
  int quadrature_nodes = 1000;   // samples, or nodes per dimension for tensor rules
  std::uint64_t seed = 0;
  std::optional<double> beta;        // regularization; model default if absent
  std::optional<double> variation;   // model default if absent
  std::string out = "runs";

  // Throws std::invalid_argument naming the offending field.
  void Validate() const;
  double ExpansionPoint() const;
  double FrequencyScale() const;
  LyapunovMethod Lyapunov() const;
  // Regularization parameter, or nullopt for ODE models.
  std::optional<double> Beta() const;

  static RunConfig FromJson(const nlohmann::json &j);
  nlohmann::ordered_json ToJson() const;
};

std::string ToString(Model model);
Model ParseModel(const std::string &name);

inline constexpr double kMsdExpansionPoint = 0.7;
inline constexpr double kBpfExpansionPoint = 1e6;
inline constexpr double kBpfFrequencyScale = 1e5;

std::string ToString(LyapunovMethod method);
LyapunovMethod ParseLyapunovMethod(const std::string &name);

struct RunResult
{
  bool ok = false;
  std::string failed_stage;   // empty when ok
  StabilityReport stability;
  nlohmann::ordered_json report;

  std::string Csv() const { return stability.ToCsv(); }
};

// The model family of cfg with its default or configured variation, regularized when
// `regularize` is set and cfg.Beta() has a value.
AffineParamSystem BuildModel(const RunConfig &cfg, bool regularize = true);

// build -> regularize (DAE) -> assemble -> Arnoldi -> stabilize -> sweep. A failing
// stage stops the pipeline; the report keeps everything computed up to that point.
RunResult RunExperiment(const RunConfig &cfg);

// Writes config.json, report.json and stability.csv into <base>/<timestamp>-<hash>/ and
// returns that directory.
std::filesystem::path WriteRun(const RunConfig &cfg, const RunResult &result,
                               const std::filesystem::path &base);

// Stable 64-bit FNV-1a hash of the serialized config, as 16 hex digits.
std::string ConfigHash(const RunConfig &cfg);

}  // namespace sgmor

#endif  // SGMOR_EXPERIMENT_HPP
