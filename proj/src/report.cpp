#include "kvnlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kvnlab {

namespace {

nlohmann::json config_echo(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["run"]["experiment"] = experiment_name(cfg.experiment);
  j["run"]["dt"] = cfg.dt;
  j["run"]["t_final"] = cfg.t_final;
  j["run"]["sample_stride"] = cfg.sample_stride;
  j["run"]["seed"] = cfg.seed;
  j["run"]["sigma_m"] = cfg.sigma_m;
  j["physics"]["hbar"] = cfg.hbar;
  j["physics"]["m"] = cfg.m;
  j["physics"]["omega"] = cfg.omega;
  j["grid"]["nq"] = cfg.nq;
  j["grid"]["np"] = cfg.np;
  j["grid"]["q_min"] = cfg.q_min;
  j["grid"]["q_max"] = cfg.q_max;
  j["grid"]["p_min"] = cfg.p_min;
  j["grid"]["p_max"] = cfg.p_max;
  j["state"]["q_center"] = cfg.q_center;
  j["state"]["p_center"] = cfg.p_center;
  j["state"]["sigma_q"] = cfg.sigma_q;
  j["state"]["sigma_p"] = cfg.sigma_p;
  j["state"]["alpha1_re"] = cfg.alpha1_re;
  j["state"]["alpha1_im"] = cfg.alpha1_im;
  j["state"]["alpha2_re"] = cfg.alpha2_re;
  j["state"]["alpha2_im"] = cfg.alpha2_im;
  j["state"]["n_trunc"] = cfg.n_trunc;
  j["perturbation"]["kind"] = cfg.kind == PerturbationKind::none ? "none"
                              : cfg.kind == PerturbationKind::quartic_stabilizer ? "quartic_stabilizer"
                                                                                 : "hidden_coupling";
  // json has no infinity; lambda rides as a string when the stabilizer is off
  if (std::isinf(cfg.lambda)) j["perturbation"]["lambda"] = "inf";
  else j["perturbation"]["lambda"] = cfg.lambda;
  j["perturbation"]["epsilon"] = cfg.epsilon;
  j["io"]["output_dir"] = cfg.output_dir;
  j["io"]["formats"] = cfg.formats;
  return j;
}

void strip_runtime(nlohmann::json& j) {
  if (j.is_object()) {
    j.erase("runtime_seconds");
    for (auto& [key, value] : j.items()) strip_runtime(value);
  } else if (j.is_array()) {
    for (auto& value : j) strip_runtime(value);
  }
}

}  // namespace

bool RunReport::all_passed() const {
  for (const auto& check : checks)
    if (!check.passed) return false;
  return true;
}

nlohmann::json check_to_json(const CheckResult& check) {
  nlohmann::json j;
  j["id"] = check.id;
  j["name"] = check.name;
  j["measured"] = check.measured;
  j["threshold"] = check.threshold;
  j["relation"] = check.relation;
  j["passed"] = check.passed;
  j["runtime_seconds"] = check.runtime_seconds;
  j["detail"] = check.detail;
  return j;
}

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json j;
  j["config"] = config_echo(report.config);
  j["metrics"] = report.metrics;
  j["series_files"] = report.series_files;
  j["checks"] = nlohmann::json::array();
  for (const auto& check : report.checks) j["checks"].push_back(check_to_json(check));
  j["all_passed"] = report.all_passed();
  j["runtime_seconds"] = report.runtime_seconds;
  return j;
}

std::string report_canonical_string(const RunReport& report) {
  nlohmann::json j = report_to_json(report);
  strip_runtime(j);
  return j.dump(2);
}

void write_report_json(const std::string& path, const RunReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << report_to_json(report).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_series_csv(const std::string& path, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << "\n";
  char buf[32];
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw std::invalid_argument("series row width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.16e", row[c]);
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace kvnlab
