// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "sgmor/bench.hpp"
#include "sgmor/experiment.hpp"
#include "sgmor/frequency.hpp"
#include "sgmor/galerkin.hpp"
#include "sgmor/lyapunov.hpp"
#include "sgmor/mor.hpp"
#include "sgmor/stabilize.hpp"

namespace py = pybind11;
using namespace sgmor;

namespace
{

AffineParamSystem LoadModel(const std::string &name, std::optional<double> beta)
{
  RunConfig cfg;
  cfg.model = ParseModel(name);
  cfg.beta = beta;
  return BuildModel(cfg, beta.has_value());
}

py::dict SystemDict(const LtiSystem &s)
{
  py::dict d;
  d["E"] = s.E;
  d["A"] = s.A;
  d["B"] = s.B;
  d["C"] = s.C;
  return d;
}

LtiSystem FromMatrices(const SparseMatrix &E, const SparseMatrix &A, const SparseMatrix &B,
                       const SparseMatrix &C)
{
  LtiSystem s{E, A, B, C};
  s.Validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Stochastic Galerkin model order reduction";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("basis_count", &BasisCount, py::arg("num_params"), py::arg("degree"));

  m.def(
      "model_system",
      [](const std::string &model, const std::vector<double> &mu, std::optional<double> beta)
      { return SystemDict(LoadModel(model, beta).Evaluate(mu)); },
      py::arg("model"), py::arg("mu"), py::arg("beta") = py::none(),
      "Matrices of a benchmark model at one parameter vector.");

  m.def(
      "model_mean",
      [](const std::string &model) { return Vector(LoadModel(model, std::nullopt).Mean()); },
      py::arg("model"));

  m.def(
      "galerkin_system",
      [](const std::string &model, int degree, std::optional<double> beta)
      {
        const AffineParamSystem aps = LoadModel(model, beta);
        const GalerkinSystem gal = Assemble(aps, PolynomialChaosBasis(aps.Distributions(), degree));
        py::dict d = SystemDict(gal.system);
        d["basis_size"] = gal.basis_size;
        d["state_size"] = gal.state_size;
        return d;
      },
      py::arg("model"), py::arg("degree") = 1, py::arg("beta") = py::none());

  m.def("solve_lyap_direct", &SolveLyapDirect, py::arg("E"), py::arg("A"), py::arg("F"),
        "Solves A^T M E + E^T M A + F = 0.");
  m.def("lyap_residual", &LyapResidual, py::arg("E"), py::arg("A"), py::arg("F"), py::arg("M"));

  m.def(
      "h2_norm",
      [](const SparseMatrix &E, const SparseMatrix &A, const SparseMatrix &B,
         const SparseMatrix &C, double scale)
      {
        H2Options opts;
        opts.scale = scale;
        const H2Estimate est = EstimateH2Norm(FromMatrices(E, A, B, C), opts);
        py::dict d;
        d["value"] = est.value;
        d["nodes"] = est.nodes;
        d["converged"] = est.converged;
        d["possibly_infinite"] = est.possibly_infinite;
        return d;
      },
      py::arg("E"), py::arg("A"), py::arg("B"), py::arg("C"), py::arg("scale") = 1.0);

  m.def(
      "arnoldi",
      [](const SparseMatrix &E, const SparseMatrix &A, const SparseMatrix &B, double s0,
         Index r_max)
      {
        const ArnoldiResult r = Arnoldi(E, A, B, s0, r_max);
        return py::make_tuple(r.V, r.rank, r.breakdown);
      },
      py::arg("E"), py::arg("A"), py::arg("B"), py::arg("s0"), py::arg("r_max"));

  m.def(
      "theta_margins",
      [](const std::string &model, int degree, const std::vector<double> &thetas)
      {
        const AffineParamSystem aps = LoadModel(model, std::nullopt);
        const Matrix F = Matrix::Identity(aps.Order(), aps.Order());
        std::vector<double> out;
        for (const auto &p : ThetaMarginSweep(aps, degree, thetas, F))
        {
          out.push_back(p.margin);
        }
        return out;
      },
      py::arg("model"), py::arg("degree"), py::arg("thetas"));

  m.def(
      "run_experiment_json",
      [](const std::string &config)
      {
        const RunConfig cfg = RunConfig::FromJson(nlohmann::json::parse(config));
        RunResult res;
        {
          py::gil_scoped_release release;
          res = RunExperiment(cfg);
        }
        return py::make_tuple(res.ok, res.report.dump(), res.Csv());
      },
      py::arg("config"));
}
