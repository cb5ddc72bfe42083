// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include "sgmor/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "sgmor/bench.hpp"
#include "sgmor/galerkin.hpp"
#include "sgmor/lyapunov.hpp"

namespace sgmor
{

namespace
{

using Clock = std::chrono::steady_clock;

std::string QuadratureName(QuadratureKind kind)
{
  return kind == QuadratureKind::tensor ? "tensor" : "monte_carlo";
}

void WriteFile(const std::filesystem::path &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

}  // namespace

std::string ToString(Model model)
{
  return model == Model::msd ? "msd" : "bpf";
}

Model ParseModel(const std::string &name)
{
  if (name == "msd")
  {
    return Model::msd;
  }
  if (name == "bpf")
  {
    return Model::bpf;
  }
  throw std::invalid_argument("unknown model '" + name + "' (expected msd or bpf)");
}

std::string ToString(LyapunovMethod method)
{
  return method == LyapunovMethod::frequency ? "frequency" : "direct";
}

LyapunovMethod ParseLyapunovMethod(const std::string &name)
{
  if (name == "frequency")
  {
    return LyapunovMethod::frequency;
  }
  if (name == "direct")
  {
    return LyapunovMethod::direct;
  }
  throw std::invalid_argument("unknown Lyapunov method '" + name +
                              "' (expected frequency or direct)");
}

void RunConfig::Validate() const
{
  if (degree < 0)
  {
    throw std::invalid_argument("degree must be non-negative");
  }
  if (r_min < 1 || r_max < r_min)
  {
    throw std::invalid_argument("need 1 <= r_min <= r_max");
  }
  if (freq_nodes < 1 || h2_nodes < 1)
  {
    throw std::invalid_argument("frequency node counts must be positive");
  }
  if (quadrature_nodes < 1)
  {
    throw std::invalid_argument("quadrature_nodes must be positive");
  }
  if (beta && !(*beta > 0.0))
  {
    throw std::invalid_argument("beta must be positive");
  }
  if (variation && !(*variation >= 0.0 && *variation < 1.0))
  {
    throw std::invalid_argument("variation must lie in [0, 1)");
  }
  if (expansion_point && !std::isfinite(*expansion_point))
  {
    throw std::invalid_argument("expansion_point must be finite");
  }
  if (frequency_scale && !(*frequency_scale > 0.0 && std::isfinite(*frequency_scale)))
  {
    throw std::invalid_argument("frequency_scale must be positive");
  }
}

double RunConfig::FrequencyScale() const
{
  if (frequency_scale)
  {
    return *frequency_scale;
  }
  return model == Model::msd ? 1.0 : kBpfFrequencyScale;
}

LyapunovMethod RunConfig::Lyapunov() const
{
  if (lyapunov)
  {
    return *lyapunov;
  }
  return model == Model::msd ? LyapunovMethod::frequency : LyapunovMethod::direct;
}

double RunConfig::ExpansionPoint() const
{
  if (expansion_point)
  {
    return *expansion_point;
  }
  return model == Model::msd ? kMsdExpansionPoint : kBpfExpansionPoint;
}

std::optional<double> RunConfig::Beta() const
{
  if (model == Model::msd)
  {
    return beta;
  }
  return beta.value_or(kDefaultBeta);
}

RunConfig RunConfig::FromJson(const nlohmann::json &j)
{
  if (!j.is_object())
  {
    throw std::invalid_argument("run config must be a JSON object");
  }
  RunConfig cfg;
  for (const auto &[key, value] : j.items())
  {
    try
    {
      if (key == "model")
      {
        cfg.model = ParseModel(value.get<std::string>());
      }
      else if (key == "degree")
      {
        cfg.degree = value.get<int>();
      }
      else if (key == "technique")
      {
        cfg.technique = ParseTechnique(value.get<std::string>());
      }
      else if (key == "expansion_point")
      {
        cfg.expansion_point = value.get<double>();
      }
      else if (key == "r_min")
      {
        cfg.r_min = value.get<Index>();
      }
      else if (key == "r_max")
      {
        cfg.r_max = value.get<Index>();
      }
      else if (key == "freq_nodes")
      {
        cfg.freq_nodes = value.get<int>();
      }
      else if (key == "lyapunov")
      {
        cfg.lyapunov = ParseLyapunovMethod(value.get<std::string>());
      }
      else if (key == "frequency_scale")
      {
        cfg.frequency_scale = value.get<double>();
      }
      else if (key == "h2_nodes")
      {
        cfg.h2_nodes = value.get<int>();
      }
      else if (key == "compute_h2")
      {
        cfg.compute_h2 = value.get<bool>();
      }
      else if (key == "quadrature")
      {
        const auto name = value.get<std::string>();
        if (name == "tensor")
        {
          cfg.quadrature = QuadratureKind::tensor;
        }
        else if (name == "monte_carlo")
        {
          cfg.quadrature = QuadratureKind::monte_carlo;
        }
        else
        {
          throw std::invalid_argument("expected tensor or monte_carlo");
        }
      }
      else if (key == "quadrature_nodes")
      {
        cfg.quadrature_nodes = value.get<int>();
      }
      else if (key == "seed")
      {
        cfg.seed = value.get<std::uint64_t>();
      }
      else if (key == "beta")
      {
        cfg.beta = value.get<double>();
      }
      else if (key == "variation")
      {
        cfg.variation = value.get<double>();
      }
      else if (key == "out")
      {
        cfg.out = value.get<std::string>();
      }
      else
      {
        throw std::invalid_argument("unknown key");
      }
    }
    catch (const nlohmann::json::exception &ex)
    {
      throw std::invalid_argument("run config field '" + key + "': " + ex.what());
    }
    catch (const std::invalid_argument &ex)
    {
      throw std::invalid_argument("run config field '" + key + "': " + ex.what());
    }
  }
  cfg.Validate();
  return cfg;
}

nlohmann::ordered_json RunConfig::ToJson() const
{
  nlohmann::ordered_json j;
  j["model"] = ToString(model);
  j["degree"] = degree;
  j["technique"] = ToString(technique);
  if (expansion_point)
  {
    j["expansion_point"] = *expansion_point;
  }
  j["r_min"] = r_min;
  j["r_max"] = r_max;
  j["freq_nodes"] = freq_nodes;
  if (lyapunov)
  {
    j["lyapunov"] = ToString(*lyapunov);
  }
  if (frequency_scale)
  {
    j["frequency_scale"] = *frequency_scale;
  }
  j["h2_nodes"] = h2_nodes;
  j["compute_h2"] = compute_h2;
  j["quadrature"] = QuadratureName(quadrature);
  j["quadrature_nodes"] = quadrature_nodes;
  j["seed"] = seed;
  if (beta)
  {
    j["beta"] = *beta;
  }
  if (variation)
  {
    j["variation"] = *variation;
  }
  j["out"] = out;
  return j;
}

std::string ConfigHash(const RunConfig &cfg)
{
  const std::string text = cfg.ToJson().dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text)
  {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

AffineParamSystem BuildModel(const RunConfig &cfg, bool regularize)
{
  std::optional<AffineParamSystem> aps;
  if (cfg.model == Model::msd)
  {
    MsdConfig mc;
    if (cfg.variation)
    {
      mc.variation = *cfg.variation;
    }
    aps = BuildMsd(mc);
  }
  else
  {
    BpfConfig bc;
    if (cfg.variation)
    {
      bc.variation = *cfg.variation;
    }
    aps = BuildBandpass(bc);
  }
  if (const auto beta = cfg.Beta(); beta && regularize)
  {
    return Regularize(*aps, *beta);
  }
  return std::move(*aps);
}

RunResult RunExperiment(const RunConfig &cfg)
{
  cfg.Validate();
  RunResult result;
  auto &report = result.report;
  report["config"] = cfg.ToJson();
  report["stages"] = nlohmann::ordered_json::array();
  report["tolerances"] = {{"arnoldi_breakdown", kBreakdownTolerance},
                          {"arnoldi_reorthogonalization_passes", 1},
                          {"stability", "abscissa < 0"}};

  auto stage = [&](const std::string &name, const std::function<void()> &body) -> bool
  {
    const auto start = Clock::now();
    nlohmann::ordered_json entry;
    entry["name"] = name;
    bool ok = true;
    try
    {
      body();
      entry["status"] = "ok";
    }
    catch (const std::exception &ex)
    {
      ok = false;
      entry["status"] = "failed";
      entry["error"] = ex.what();
      result.failed_stage = name;
    }
    entry["seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    report["stages"].push_back(entry);
    return ok;
  };

  std::optional<AffineParamSystem> aps;
  std::optional<PolynomialChaosBasis> basis;
  std::optional<GalerkinSystem> gal;
  std::optional<ArnoldiResult> krylov;
  std::optional<Matrix> W;
  std::optional<GalerkinSystem> reduced_from;   // technique ii: transformed system
  const double s0 = cfg.ExpansionPoint();
  const auto beta = cfg.Beta();

  auto run = [&]() -> bool
  {
    if (!stage("build",
               [&]
               {
                 aps = BuildModel(cfg, false);
                 report["model"] = {{"name", ToString(cfg.model)},
                                    {"n", aps->Order()},
                                    {"q", aps->NumParams()},
                                    {"n_in", aps->NumInputs()},
                                    {"n_out", aps->NumOutputs()}};
               }))
    {
      return false;
    }
    if (beta && !stage("regularize",
                       [&]
                       {
                         aps = Regularize(*aps, *beta);
                         const auto p = RegularizationParams::FromBeta(*beta);
                         report["regularization"] = {{"beta", p.beta}, {"alpha", p.alpha}};
                       }))
    {
      return false;
    }
    if (!stage("assemble",
               [&]
               {
                 basis.emplace(aps->Distributions(), cfg.degree);
                 gal = Assemble(*aps, *basis);
                 report["galerkin"] = {{"m", basis->Size()},
                                       {"dimension", gal->Order()},
                                       {"outputs", gal->system.NumOutputs()},
                                       {"nnz_E", gal->system.E.nonZeros()},
                                       {"nnz_A", gal->system.A.nonZeros()},
                                       {"provenance", gal->ProvenanceTag()}};
               }))
    {
      return false;
    }
    if (!stage("arnoldi",
               [&]
               {
                 krylov = Arnoldi(gal->system.E, gal->system.A, gal->system.B, s0, cfg.r_max);
                 report["arnoldi"] = {{"expansion_point", s0},
                                      {"rank", krylov->rank},
                                      {"breakdown", krylov->breakdown},
                                      {"deflated", krylov->deflated}};
               }))
    {
      return false;
    }
    if (cfg.technique != Technique::none &&
        !stage("stabilize",
               [&]
               {
                 const Matrix F = Matrix::Identity(aps->Order(), aps->Order());
                 StabilizationOutcome outcome;
                 switch (cfg.technique)
                 {
                   case Technique::i:
                     if (cfg.Lyapunov() == LyapunovMethod::direct)
                     {
                       outcome = TechniqueIDirect(
                           *gal, krylov->V, Matrix::Identity(gal->Order(), gal->Order()));
                     }
                     else
                     {
                       outcome = TechniqueI(
                           *gal, krylov->V,
                           FrequencyRule::GaussLegendre(cfg.freq_nodes, cfg.FrequencyScale()));
                     }
                     break;
                   case Technique::ii:
                   {
                     const QuadratureRule rule =
                         cfg.quadrature == QuadratureKind::tensor
                             ? TensorRule(aps->Distributions(), cfg.quadrature_nodes)
                             : MonteCarloRule(aps->Distributions(), cfg.quadrature_nodes,
                                              cfg.seed);
                     outcome = TechniqueII(*aps, *basis, rule, F);
                     break;
                   }
                   case Technique::iii:
                   {
                     const Vector mean = aps->Mean();
                     outcome = TechniqueIII(*gal, *aps, std::span<const double>(mean.data(), mean.size()),
                                            F, krylov->V);
                     break;
                   }
                   case Technique::none:
                     break;
                 }
                 const auto &d = outcome.diagnostics;
                 nlohmann::ordered_json diag;
                 diag["technique"] = ToString(outcome.technique);
                 if (d.margin)
                 {
                   diag["margin"] = *d.margin;
                 }
                 diag["frequency_nodes"] = d.frequency_nodes;
                 diag["quadrature_nodes"] = d.quadrature_nodes;
                 if (d.e_min_eigenvalue)
                 {
                   diag["e_min_eigenvalue"] = *d.e_min_eigenvalue;
                   diag["sym_a_max_eigenvalue"] = *d.sym_a_max_eigenvalue;
                   diag["e_positive_semidefinite"] = d.e_positive_semidefinite;
                   diag["sym_a_negative_semidefinite"] = d.sym_a_negative_semidefinite;
                 }
                 diag["seconds"] = d.seconds;
                 diag["notes"] = d.notes;
                 if (beta)
                 {
                   diag["beta"] = *beta;
                 }
                 report["stabilization"] = diag;
                 W = outcome.W;
                 if (outcome.transformed)
                 {
                   reduced_from = std::move(outcome.transformed);
                 }
               }))
    {
      return false;
    }
    if (reduced_from &&
        !stage("arnoldi_transformed",
               [&]
               {
                 krylov = Arnoldi(reduced_from->system.E, reduced_from->system.A,
                                  reduced_from->system.B, s0, cfg.r_max);
                 report["arnoldi_transformed"] = {{"rank", krylov->rank},
                                                  {"breakdown", krylov->breakdown}};
               }))
    {
      return false;
    }
    return stage("sweep",
                 [&]
                 {
                   const Index r_hi = std::min(cfg.r_max, krylov->rank);
                   std::vector<Index> r_list;
                   for (Index r = cfg.r_min; r <= r_hi; r++)
                   {
                     r_list.push_back(r);
                   }
                   const LtiSystem &fom = reduced_from ? reduced_from->system : gal->system;
                   std::optional<FrequencyRule> rule;
                   std::optional<FrequencySamples> reference;
                   if (cfg.compute_h2)
                   {
                     rule = FrequencyRule::GaussLegendre(cfg.h2_nodes, cfg.FrequencyScale());
                     reference = FrequencySamples::Sample(gal->system, *rule);
                     report["fom_h2_norm"] = reference->H2Norm();
                   }
                   std::optional<Matrix> Wtrunc;
                   if (W)
                   {
                     Wtrunc = W->leftCols(krylov->rank);
                   }
                   result.stability =
                       StabilitySweep(fom, krylov->V.leftCols(krylov->rank), Wtrunc, r_list,
                                      rule ? &*rule : nullptr, reference ? &*reference : nullptr);
                   nlohmann::ordered_json errors = nlohmann::ordered_json::array();
                   for (const auto &row : result.stability.rows)
                   {
                     if (!row.error.empty())
                     {
                       errors.push_back({{"r", row.r}, {"error", row.error}});
                     }
                   }
                   report["sweep"] = {{"rows", result.stability.rows.size()},
                                      {"stable", result.stability.NumStable()},
                                      {"unstable", result.stability.NumUnstable()},
                                      {"row_errors", errors}};
                 });
  };
  result.ok = run();
  report["ok"] = result.ok;
  return result;
}

std::filesystem::path WriteRun(const RunConfig &cfg, const RunResult &result,
                               const std::filesystem::path &base)
{
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
  std::filesystem::path dir = base / (std::string(stamp) + "-" + ConfigHash(cfg).substr(0, 8));
  // Same second, same config: add a counter.
  for (int k = 1; std::filesystem::exists(dir); k++)
  {
    dir = base / (std::string(stamp) + "-" + ConfigHash(cfg).substr(0, 8) + "-" +
                  std::to_string(k));
  }
  std::filesystem::create_directories(dir);
  WriteFile(dir / "config.json", cfg.ToJson().dump(2) + "\n");
  WriteFile(dir / "report.json", result.report.dump(2) + "\n");
  WriteFile(dir / "stability.csv", result.Csv());
  return dir;
}

}  // namespace sgmor
