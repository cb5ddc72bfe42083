// Copyright (c) sgmor contributors.
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sgmor/experiment.hpp"

using namespace sgmor;

TEST_CASE("run config JSON round trip and validation")
{
  const auto j = nlohmann::json::parse(
      R"({"model": "bpf", "degree": 2, "technique": "iii", "r_max": 12, "seed": 5,
          "lyapunov": "frequency", "frequency_scale": 2.5, "beta": 1e-4})");
  const RunConfig cfg = RunConfig::FromJson(j);
  CHECK(cfg.model == Model::bpf);
  CHECK(cfg.degree == 2);
  CHECK(cfg.technique == Technique::iii);
  CHECK(cfg.Lyapunov() == LyapunovMethod::frequency);
  CHECK(cfg.FrequencyScale() == 2.5);
  CHECK(*cfg.Beta() == 1e-4);
  const RunConfig again = RunConfig::FromJson(nlohmann::json::parse(cfg.ToJson().dump()));
  CHECK(ConfigHash(again) == ConfigHash(cfg));
  CHECK(ConfigHash(again).size() == 16);

  CHECK_THROWS_AS(RunConfig::FromJson(nlohmann::json::parse(R"({"colour": 1})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::FromJson(nlohmann::json::parse(R"({"degree": -1})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::FromJson(nlohmann::json::parse(R"({"r_max": "x"})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::FromJson(nlohmann::json::parse(R"({"model": "rlc"})")),
                  std::invalid_argument);
}

TEST_CASE("model defaults")
{
  RunConfig msd;
  CHECK(msd.ExpansionPoint() == kMsdExpansionPoint);
  CHECK_FALSE(msd.Beta());
  CHECK(msd.Lyapunov() == LyapunovMethod::frequency);
  RunConfig bpf;
  bpf.model = Model::bpf;
  CHECK(bpf.ExpansionPoint() == kBpfExpansionPoint);
  CHECK(*bpf.Beta() == kDefaultBeta);
  CHECK(bpf.Lyapunov() == LyapunovMethod::direct);
}

TEST_CASE("pipeline report and run directory")
{
  RunConfig cfg;
  cfg.r_max = 8;
  cfg.compute_h2 = false;
  const RunResult res = RunExperiment(cfg);
  REQUIRE(res.ok);
  CHECK(res.stability.rows.size() == 8);
  CHECK(res.report["galerkin"]["dimension"] == 180);
  CHECK(res.report["stages"].size() == 4);
  const auto base = std::filesystem::temp_directory_path() / "sgmor_run_test";
  std::filesystem::remove_all(base);
  const auto dir = WriteRun(cfg, res, base);
  CHECK(std::filesystem::exists(dir / "config.json"));
  CHECK(std::filesystem::exists(dir / "report.json"));
  std::ifstream csv(dir / "stability.csv");
  std::stringstream text;
  text << csv.rdbuf();
  CHECK(text.str() == res.Csv());
  CHECK(dir.filename().string().find(ConfigHash(cfg).substr(0, 8)) != std::string::npos);
  // Second write of the same config lands in a distinct directory.
  CHECK(WriteRun(cfg, res, base) != dir);
  std::filesystem::remove_all(base);
}

TEST_CASE("a failing stage is reported with the partial results")
{
  RunConfig cfg;
  cfg.technique = Technique::ii;
  cfg.quadrature = QuadratureKind::tensor;
  cfg.quadrature_nodes = 3;   // 3^17 nodes exceed the tensor cap
  cfg.compute_h2 = false;
  const RunResult res = RunExperiment(cfg);
  CHECK_FALSE(res.ok);
  CHECK(res.failed_stage == "stabilize");
  CHECK(res.report["arnoldi"]["rank"] == 30);
  CHECK(res.report["stages"].back()["status"] == "failed");
}

TEST_CASE("identical configs give identical CSV")
{
  RunConfig cfg;
  cfg.technique = Technique::ii;
  cfg.quadrature_nodes = 200;
  cfg.seed = 77;
  cfg.r_max = 10;
  const std::string a = RunExperiment(cfg).Csv();
  const std::string b = RunExperiment(cfg).Csv();
  CHECK(a == b);
}
