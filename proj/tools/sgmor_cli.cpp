// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

// Command line front end: benchmark pipelines, Galerkin assembly, reduction,
// stabilization and H2 errors on Matrix Market manifests.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgmor/experiment.hpp"
#include "sgmor/frequency.hpp"
#include "sgmor/galerkin.hpp"
#include "sgmor/matrix_market.hpp"
#include "sgmor/mor.hpp"
#include "sgmor/stabilize.hpp"

namespace
{

using namespace sgmor;
using json = nlohmann::json;

// Flag values shared by the model-based subcommands.
struct Flags
{
  int degree = 1;
  std::string technique = "none";
  int nodes = 64;
  int quadrature_nodes = 1000;
  std::string quadrature = "monte_carlo";
  Index rmax = 30;
  double beta = 0.0;
  double s0 = 0.0;
  double variation = -1.0;
  std::uint64_t seed = 0;
  int h2_nodes = 200;
  std::string lyapunov;
  double freq_scale = 1.0;
  bool no_h2 = false;
  std::string out = "runs";
  std::string config;
};

void AddCommonFlags(CLI::App *cmd, Flags &f)
{
  cmd->add_option("--degree", f.degree, "Total polynomial degree of the basis");
  cmd->add_option("--technique", f.technique, "Stabilization technique")
      ->check(CLI::IsMember({"none", "i", "ii", "iii"}));
  cmd->add_option("--nodes", f.nodes, "Frequency nodes for technique i");
  cmd->add_option("--quad-nodes", f.quadrature_nodes,
                  "Quadrature samples (or nodes per dimension) for technique ii");
  cmd->add_option("--quadrature", f.quadrature, "Quadrature rule for technique ii")
      ->check(CLI::IsMember({"tensor", "monte_carlo"}));
  cmd->add_option("--rmax", f.rmax, "Largest reduced dimension");
  cmd->add_option("--beta", f.beta, "Regularization parameter (DAE models)");
  cmd->add_option("--s0", f.s0, "Real expansion point (model default if omitted)");
  cmd->add_option("--variation", f.variation, "Relative parameter variation");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--h2-nodes", f.h2_nodes, "Frequency nodes for H2 errors");
  cmd->add_option("--lyapunov", f.lyapunov, "Technique i Lyapunov method (model default)")
      ->check(CLI::IsMember({"frequency", "direct"}));
  cmd->add_option("--freq-scale", f.freq_scale,
                  "Frequency scale of the quadrature rules (model default)");
  cmd->add_flag("--no-h2", f.no_h2, "Skip H2 error evaluation");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--config", f.config, "JSON run config; its keys override the flags");
}

RunConfig ConfigFromFlags(const std::string &model, const Flags &f, const CLI::App *cmd)
{
  json j = json::object();
  j["model"] = model;
  j["degree"] = f.degree;
  j["technique"] = f.technique;
  j["freq_nodes"] = f.nodes;
  j["quadrature"] = f.quadrature;
  j["quadrature_nodes"] = f.quadrature_nodes;
  j["r_max"] = f.rmax;
  j["seed"] = f.seed;
  j["h2_nodes"] = f.h2_nodes;
  j["compute_h2"] = !f.no_h2;
  j["out"] = f.out;
  if (cmd->count("--beta"))
  {
    j["beta"] = f.beta;
  }
  if (cmd->count("--s0"))
  {
    j["expansion_point"] = f.s0;
  }
  if (cmd->count("--variation"))
  {
    j["variation"] = f.variation;
  }
  if (cmd->count("--lyapunov"))
  {
    j["lyapunov"] = f.lyapunov;
  }
  if (cmd->count("--freq-scale"))
  {
    j["frequency_scale"] = f.freq_scale;
  }
  if (!f.config.empty())
  {
    std::ifstream in(f.config);
    if (!in)
    {
      throw std::runtime_error("cannot open " + f.config);
    }
    j.merge_patch(json::parse(in));
  }
  return RunConfig::FromJson(j);
}

int RunBench(const std::string &model, const Flags &f, const CLI::App *cmd)
{
  const RunConfig cfg = ConfigFromFlags(model, f, cmd);
  const RunResult result = RunExperiment(cfg);
  const auto dir = WriteRun(cfg, result, cfg.out);
  std::cout << result.Csv();
  std::cerr << "run directory: " << dir.string() << "\n";
  if (!result.ok)
  {
    std::cerr << "stage '" << result.failed_stage << "' failed, see report.json\n";
    return 1;
  }
  std::cerr << "stable ROMs: " << result.stability.NumStable() << " of "
            << result.stability.rows.size() << "\n";
  return 0;
}

int RunAssemble(const std::string &model, const Flags &f, const CLI::App *cmd)
{
  const RunConfig cfg = ConfigFromFlags(model, f, cmd);
  const AffineParamSystem aps = BuildModel(cfg);
  const PolynomialChaosBasis basis(aps.Distributions(), cfg.degree);
  const GalerkinSystem gal = Assemble(aps, basis);
  const auto manifest = io::WriteSystem(gal.system, cfg.out, "galerkin");
  std::cout << "m = " << gal.basis_size << ", dimension = " << gal.Order()
            << ", outputs = " << gal.system.NumOutputs() << "\n"
            << manifest.string() << "\n";
  return 0;
}

int RunStabilize(const std::string &model, const Flags &f, const CLI::App *cmd,
                 const std::vector<double> &thetas)
{
  const RunConfig cfg = ConfigFromFlags(model, f, cmd);
  const AffineParamSystem aps = BuildModel(cfg);
  const Matrix F = Matrix::Identity(aps.Order(), aps.Order());
  nlohmann::ordered_json out;
  out["technique"] = ToString(cfg.technique);
  if (!thetas.empty())
  {
    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (const auto &p : ThetaMarginSweep(aps, cfg.degree, thetas, F))
    {
      curve.push_back({{"theta", p.theta}, {"margin", p.margin}});
    }
    out["theta_margins"] = curve;
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  const PolynomialChaosBasis basis(aps.Distributions(), cfg.degree);
  const GalerkinSystem gal = Assemble(aps, basis);
  std::filesystem::create_directories(cfg.out);
  StabilizationOutcome outcome;
  if (cfg.technique == Technique::ii)
  {
    const QuadratureRule rule =
        cfg.quadrature == QuadratureKind::tensor
            ? TensorRule(aps.Distributions(), cfg.quadrature_nodes)
            : MonteCarloRule(aps.Distributions(), cfg.quadrature_nodes, cfg.seed);
    outcome = TechniqueII(aps, basis, rule, F);
    out["system"] = io::WriteSystem(outcome.transformed->system, cfg.out, "transformed").string();
  }
  else if (cfg.technique == Technique::i || cfg.technique == Technique::iii)
  {
    const ArnoldiResult krylov =
        Arnoldi(gal.system.E, gal.system.A, gal.system.B, cfg.ExpansionPoint(), cfg.r_max);
    if (cfg.technique == Technique::i && cfg.Lyapunov() == LyapunovMethod::direct)
    {
      outcome = TechniqueIDirect(gal, krylov.V, Matrix::Identity(gal.Order(), gal.Order()));
    }
    else if (cfg.technique == Technique::i)
    {
      outcome = TechniqueI(gal, krylov.V,
                           FrequencyRule::GaussLegendre(cfg.freq_nodes, cfg.FrequencyScale()));
    }
    else
    {
      const Vector mean = aps.Mean();
      outcome = TechniqueIII(gal, aps, std::span<const double>(mean.data(), mean.size()), F,
                             krylov.V);
    }
    io::WriteMatrixMarket(std::filesystem::path(cfg.out) / "V.mtx", krylov.V.sparseView());
    io::WriteMatrixMarket(std::filesystem::path(cfg.out) / "W.mtx", outcome.W->sparseView());
    out["V"] = (std::filesystem::path(cfg.out) / "V.mtx").string();
    out["W"] = (std::filesystem::path(cfg.out) / "W.mtx").string();
  }
  else
  {
    throw std::invalid_argument("stabilize needs --technique i, ii or iii");
  }
  const auto &d = outcome.diagnostics;
  if (d.margin)
  {
    out["margin"] = *d.margin;
  }
  if (d.e_min_eigenvalue)
  {
    out["e_min_eigenvalue"] = *d.e_min_eigenvalue;
    out["sym_a_max_eigenvalue"] = *d.sym_a_max_eigenvalue;
  }
  out["frequency_nodes"] = d.frequency_nodes;
  out["quadrature_nodes"] = d.quadrature_nodes;
  out["seconds"] = d.seconds;
  out["notes"] = d.notes;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int RunReduce(const std::string &system, double s0, Index rmax, const std::string &technique,
              int nodes, double scale, bool sweep, const std::string &out_dir)
{
  const LtiSystem fom = io::ReadSystem(system);
  const ArnoldiResult krylov = Arnoldi(fom.E, fom.A, fom.B, s0, rmax);
  std::optional<Matrix> W;
  const Technique tech = ParseTechnique(technique);
  if (tech == Technique::i)
  {
    GalerkinSystem gal;
    gal.system = fom;
    gal.basis_size = 1;
    gal.state_size = fom.Order();
    W = TechniqueI(gal, krylov.V, FrequencyRule::GaussLegendre(nodes, scale)).W;
  }
  else if (tech != Technique::none)
  {
    throw std::invalid_argument("reduce on a manifest supports --technique none or i");
  }
  const ProjectionPair pair =
      W ? ProjectionPair::Petrov(krylov.V, *W) : ProjectionPair::Galerkin(krylov.V);
  const ReducedSystem rom = Reduce(fom, pair, s0, tech);
  const auto manifest = io::WriteSystem(ToSparse(rom.system), out_dir, "rom");
  for (const auto &w : rom.warnings)
  {
    std::cerr << "warning: " << w << "\n";
  }
  std::cerr << "rank " << krylov.rank << (krylov.breakdown ? " (breakdown)" : "") << "\n";
  std::cout << manifest.string() << "\n";
  if (sweep)
  {
    std::vector<Index> r_list;
    for (Index r = 1; r <= krylov.rank; r++)
    {
      r_list.push_back(r);
    }
    const FrequencyRule rule = FrequencyRule::GaussLegendre(kDefaultH2Nodes, scale);
    const StabilityReport report = StabilitySweep(fom, krylov.V, W, r_list, &rule);
    std::ofstream csv(std::filesystem::path(out_dir) / "stability.csv");
    csv << report.ToCsv();
    std::cout << report.ToCsv();
  }
  return 0;
}

int RunH2Error(const std::string &fom_path, const std::string &rom_path, int nodes,
               double scale)
{
  const LtiSystem fom = io::ReadSystem(fom_path);
  const LtiSystem rom = io::ReadSystem(rom_path);
  H2Options opts;
  opts.initial_nodes = nodes;
  opts.max_nodes = nodes;
  opts.scale = scale;
  const H2Estimate norm = EstimateH2Norm(fom, opts);
  const FrequencyRule rule = FrequencyRule::GaussLegendre(nodes, scale);
  const double rel = H2RelativeError(fom, rom, rule);
  nlohmann::ordered_json out;
  out["relative_h2_error"] = rel;
  out["fom_h2_norm"] = norm.value;
  out["nodes"] = nodes;
  out["possibly_infinite"] = norm.possibly_infinite;
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Stochastic Galerkin model order reduction with stability preservation"};
  app.require_subcommand(1);

  Flags bench_flags, assemble_flags, stabilize_flags;

  auto *bench = app.add_subcommand("bench", "Run a benchmark pipeline and write a run directory");
  bench->require_subcommand(1);
  auto *bench_msd = bench->add_subcommand("msd", "Mass-spring-damper chain (q = 17)");
  auto *bench_bpf = bench->add_subcommand("bpf", "Band-pass ladder DAE (q = 23)");
  AddCommonFlags(bench_msd, bench_flags);
  AddCommonFlags(bench_bpf, bench_flags);

  std::string model = "msd";
  auto *assemble = app.add_subcommand("assemble", "Write the stochastic Galerkin system");
  assemble->add_option("--model", model, "msd or bpf")->check(CLI::IsMember({"msd", "bpf"}));
  AddCommonFlags(assemble, assemble_flags);

  std::string stab_model = "msd";
  std::vector<double> thetas;
  auto *stabilize = app.add_subcommand("stabilize", "Run one stabilization technique");
  stabilize->add_option("--model", stab_model, "msd or bpf")
      ->check(CLI::IsMember({"msd", "bpf"}));
  stabilize->add_option("--thetas", thetas,
                        "Technique iii margins of the contracted family at these theta values")
      ->delimiter(',');
  AddCommonFlags(stabilize, stabilize_flags);

  std::string system, reduce_out = "rom", reduce_technique = "none";
  double s0 = 0.7;
  Index rmax = 30;
  int reduce_nodes = 64;
  double reduce_scale = 1.0;
  bool sweep = false;
  auto *reduce = app.add_subcommand("reduce", "Arnoldi reduction of a Matrix Market system");
  reduce->add_option("--system", system, "Manifest JSON of the full model")->required();
  reduce->add_option("--s0", s0, "Real expansion point");
  reduce->add_option("--rmax", rmax, "Reduced dimension");
  reduce->add_option("--technique", reduce_technique, "none or i")
      ->check(CLI::IsMember({"none", "i"}));
  reduce->add_option("--nodes", reduce_nodes, "Frequency nodes for technique i");
  reduce->add_option("--freq-scale", reduce_scale, "Frequency scale of the quadrature rules");
  reduce->add_flag("--sweep", sweep, "Also write a stability sweep over r = 1..rmax");
  reduce->add_option("--out", reduce_out, "Output directory");

  std::string fom_path, rom_path;
  int h2_nodes = kDefaultH2Nodes;
  auto *h2error = app.add_subcommand("h2error", "Relative H2 error between two systems");
  h2error->add_option("--fom", fom_path, "Manifest of the full model")->required();
  h2error->add_option("--rom", rom_path, "Manifest of the reduced model")->required();
  h2error->add_option("--nodes", h2_nodes, "Frequency nodes");
  double h2_scale = 1.0;
  h2error->add_option("--freq-scale", h2_scale, "Frequency scale of the quadrature rule");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (bench_msd->parsed())
    {
      return RunBench("msd", bench_flags, bench_msd);
    }
    if (bench_bpf->parsed())
    {
      return RunBench("bpf", bench_flags, bench_bpf);
    }
    if (assemble->parsed())
    {
      return RunAssemble(model, assemble_flags, assemble);
    }
    if (stabilize->parsed())
    {
      return RunStabilize(stab_model, stabilize_flags, stabilize, thetas);
    }
    if (reduce->parsed())
    {
      return RunReduce(system, s0, rmax, reduce_technique, reduce_nodes, reduce_scale, sweep,
                       reduce_out);
    }
    if (h2error->parsed())
    {
      return RunH2Error(fom_path, rom_path, h2_nodes, h2_scale);
    }
  }
  catch (const std::exception &ex)
  {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
