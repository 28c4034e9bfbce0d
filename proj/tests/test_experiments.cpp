#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "kvnlab/config.hpp"
#include "kvnlab/experiments.hpp"
#include "kvnlab/report.hpp"

using namespace kvnlab;

namespace {

// Every run in this file lands under its own scratch root.
struct ScratchRoot {
  std::filesystem::path root;
  explicit ScratchRoot(const std::string& tag) {
    root = std::filesystem::temp_directory_path() / ("kvnlab_expt_" + tag);
    std::filesystem::remove_all(root);
    setenv("KVNLAB_OUTPUT_ROOT", root.c_str(), 1);
  }
  ~ScratchRoot() {
    unsetenv("KVNLAB_OUTPUT_ROOT");
    std::filesystem::remove_all(root);
  }
};

int line_count(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("moment-propagation experiment writes its series and passes its invariants") {
  ScratchRoot scratch("gaussian");
  ExperimentConfig cfg = parse_config_text(
      "[run]\n"
      "experiment = gaussian\n"
      "[io]\n"
      "output_dir = g1\n");

  RunReport report = run_experiment(cfg);
  CHECK(report.all_passed());
  CHECK(report.metrics.at("back_action_qp") < 1e-12);

  auto dir = scratch.root / "g1";
  CHECK(std::filesystem::exists(dir / "report.json"));
  // default horizon: 2000 steps sampled every 10, plus the t = 0 row and a header
  CHECK(line_count(dir / "gaussian_series.csv") == 202);

  std::ifstream in(dir / "report.json");
  nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j["config"]["run"]["experiment"] == "gaussian");
  CHECK(j["checks"].size() == report.checks.size());
}

TEST_CASE("grid experiment stays on the oracle and emits csv plus a snapshot") {
  ScratchRoot scratch("kvn");
  ExperimentConfig cfg = parse_config_text(
      "[run]\n"
      "experiment = kvn\n"
      "t_final = 0.31415926535897931\n"  // 100 default steps
      "sample_stride = 20\n"
      "[grid]\n"
      "nq = 64\n"
      "np = 64\n"
      "[io]\n"
      "output_dir = k1\n"
      "formats = csv,binary\n");

  RunReport report = run_experiment(cfg);
  CHECK(report.all_passed());
  CHECK(report.metrics.at("oracle_l2_error") < 1e-6);

  auto dir = scratch.root / "k1";
  CHECK(std::filesystem::exists(dir / "kvn_series.csv"));
  CHECK(std::filesystem::exists(dir / "kvn_final.snap"));
  CHECK(line_count(dir / "kvn_series.csv") == 7);  // header + t=0 + 5 sampled rows
}

TEST_CASE("doubled experiment with a hidden coupling keeps its norm") {
  ScratchRoot scratch("doubled");
  ExperimentConfig cfg = parse_config_text(
      "[run]\n"
      "experiment = doubled\n"
      "dt = 0.005\n"
      "t_final = 0.2\n"
      "sample_stride = 10\n"
      "[grid]\n"
      "nq = 64\n"
      "np = 64\n"
      "[perturbation]\n"
      "kind = hidden_coupling\n"
      "epsilon = 0.02\n"
      "[io]\n"
      "output_dir = d1\n");

  RunReport report = run_experiment(cfg);
  CHECK(report.all_passed());
  CHECK(report.metrics.at("norm_drift") < 1e-10);
  CHECK(std::filesystem::exists(scratch.root / "d1" / "doubled_series.csv"));
}

TEST_CASE("stabilizer experiment scans the ladder and nails the infinite end") {
  ScratchRoot scratch("stab");
  ExperimentConfig cfg = parse_config_text(
      "[run]\n"
      "experiment = stabilizer\n"
      "[io]\n"
      "output_dir = s1\n");

  RunReport report = run_experiment(cfg);
  CHECK(report.all_passed());
  CHECK(report.metrics.at("deviation_lambda_inf") < 1e-10);
  CHECK(report.metrics.at("deviation_lambda_5") > report.metrics.at("deviation_lambda_80"));
  CHECK(std::filesystem::exists(scratch.root / "s1" / "report.json"));
}
