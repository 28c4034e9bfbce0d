#include "kvnlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <stdexcept>

#include "kvnlab/fields.hpp"
#include "kvnlab/gaussian.hpp"
#include "kvnlab/perturbation.hpp"
#include "kvnlab/verify.hpp"

namespace kvnlab {

namespace {

constexpr const char* kSeriesColumns[] = {"time",  "q_mean", "p_mean", "q_var",
                                          "p_var", "Q_mean", "P_mean", "norm"};

bool wants(const ExperimentConfig& cfg, const std::string& format) {
  return std::find(cfg.formats.begin(), cfg.formats.end(), format) != cfg.formats.end();
}

CheckResult make_check(const std::string& name, double measured, double threshold, const std::string& relation,
                       bool passed) {
  CheckResult out;
  out.name = name;
  out.measured = measured;
  out.threshold = threshold;
  out.relation = relation;
  out.passed = passed;
  return out;
}

std::vector<std::string> series_columns() {
  return {std::begin(kSeriesColumns), std::end(kSeriesColumns)};
}

long long step_count(const ExperimentConfig& cfg) {
  const long long n = std::llround(cfg.t_final / cfg.dt);
  if (std::abs(cfg.t_final - static_cast<double>(n) * cfg.dt) > 1e-9 * std::max(1.0, cfg.t_final))
    throw std::invalid_argument("run.t_final must be a whole number of run.dt steps");
  return n;
}

std::function<double(double, double)> config_density(const ExperimentConfig& cfg) {
  const double q0 = cfg.q_center, p0 = cfg.p_center, sq = cfg.sigma_q, sp = cfg.sigma_p;
  const double norm = 1.0 / (2.0 * M_PI * sq * sp);
  return [=](double q, double p) {
    const double dq = (q - q0) / sq, dp = (p - p0) / sp;
    return norm * std::exp(-0.5 * (dq * dq + dp * dp));
  };
}

std::vector<double> grid_series_row(double t, const ClassicalWavefunction& psi, double hbar) {
  const BivariatePolynomial q_poly = BivariatePolynomial::from_terms({{1, 0, 1.0}});
  const BivariatePolynomial p_poly = BivariatePolynomial::from_terms({{0, 1, 1.0}});
  const BivariatePolynomial q2_poly = BivariatePolynomial::from_terms({{2, 0, 1.0}});
  const BivariatePolynomial p2_poly = BivariatePolynomial::from_terms({{0, 2, 1.0}});
  const double q_mean = expectation(psi, q_poly);
  const double p_mean = expectation(psi, p_poly);
  const double q_var = expectation(psi, q2_poly) - q_mean * q_mean;
  const double p_var = expectation(psi, p2_poly) - p_mean * p_mean;
  const double big_q = hidden_expectation(psi, HiddenOperator::symbol('Q'), hbar);
  const double big_p = hidden_expectation(psi, HiddenOperator::symbol('P'), hbar);
  return {t, q_mean, p_mean, q_var, p_var, big_q, big_p, psi.norm()};
}

void run_gaussian(const ExperimentConfig& cfg, const std::string& dir, RunReport& report) {
  const CanonicalTransform s = qmfs_transform(cfg.hbar);
  const QuadraticHamiltonian mixed = transform_hamiltonian(s, oscillator_pair_hamiltonian(cfg.m, cfg.omega, cfg.hbar));
  GaussianState g0 = vacuum_state(CanonicalLayout::qmfs(cfg.hbar));
  g0.mean(0) = cfg.q_center;
  g0.mean(3) = cfg.p_center;

  std::vector<std::vector<double>> rows;
  const long long n = step_count(cfg);
  long long k = 0;
  while (true) {
    const double t = k * cfg.dt;
    const GaussianState gt = evolve_gaussian(mixed, g0, t);
    rows.push_back({t, gt.mean(0), gt.mean(3), gt.cov(0, 0), gt.cov(3, 3), gt.mean(2), gt.mean(1), 1.0});
    if (k == n) break;
    k = std::min(k + cfg.sample_stride, n);
  }

  const double evasion = back_action_deviation(mixed, g0, 0, 3, cfg.t_final, cfg.sigma_m, cfg.t_final);
  const GaussianState bare0 = vacuum_state(CanonicalLayout::oscillator_pair(cfg.hbar));
  const MeasurementOutcome probed = measure_variable(bare0, 0, cfg.sigma_m);
  const double control_shift = probed.posterior.cov(1, 1) - bare0.cov(1, 1);
  const double expected_shift = cfg.hbar * cfg.hbar / (4.0 * cfg.sigma_m * cfg.sigma_m);

  report.metrics["back_action_qp"] = evasion;
  report.metrics["back_action_q1p1"] = control_shift;
  report.checks.push_back(make_check("back_action_qp_evaded", evasion, 1e-12, "<", evasion < 1e-12));
  report.checks.push_back(make_check("back_action_q1p1_control", std::abs(control_shift - expected_shift), 1e-12,
                                     "<", std::abs(control_shift - expected_shift) < 1e-12));

  if (wants(cfg, "csv")) {
    const std::string path = dir + "/gaussian_series.csv";
    write_series_csv(path, series_columns(), rows);
    report.series_files.push_back(path);
  }
}

void run_kvn(const ExperimentConfig& cfg, const std::string& dir, RunReport& report) {
  const auto h_cl = SeparableClassicalHamiltonian::harmonic(cfg.m, cfg.omega);
  const PhaseSpaceGrid grid = cfg.grid();
  ClassicalWavefunction psi = gaussian_wavefunction(grid, cfg.q_center, cfg.p_center, cfg.sigma_q, cfg.sigma_p);
  SplitStepper stepper(h_cl, grid, cfg.dt);

  std::vector<std::vector<double>> rows;
  rows.push_back(grid_series_row(0.0, psi, cfg.hbar));
  const long long n = step_count(cfg);
  for (long long k = 1; k <= n; ++k) {
    stepper.step(psi);
    if (k % cfg.sample_stride == 0 || k == n) rows.push_back(grid_series_row(k * cfg.dt, psi, cfg.hbar));
  }

  const Eigen::MatrixXd reference = transport_density_oracle(h_cl, config_density(cfg), grid, cfg.t_final);
  const double oracle_error = l2_density_distance(psi.density(), reference, grid);
  const double norm_drift = std::abs(psi.norm() - 1.0);
  const double tail = stepper.max_boundary_tail();

  report.metrics["oracle_l2_error"] = oracle_error;
  report.metrics["norm_drift"] = norm_drift;
  report.metrics["boundary_tail"] = tail;
  report.checks.push_back(make_check("oracle_l2_error", oracle_error, 1e-6, "<", oracle_error < 1e-6));
  report.checks.push_back(make_check("norm_drift", norm_drift, 1e-12, "<", norm_drift < 1e-12));
  report.checks.push_back(make_check("boundary_tail", tail, 1e-9, "<", tail < 1e-9));

  if (wants(cfg, "csv")) {
    const std::string path = dir + "/kvn_series.csv";
    write_series_csv(path, series_columns(), rows);
    report.series_files.push_back(path);
  }
  if (wants(cfg, "binary")) write_snapshot(dir + "/kvn_final.snap", psi, cfg.t_final, cfg.hbar);
}

void run_doubled(const ExperimentConfig& cfg, const std::string& dir, RunReport& report) {
  const auto h_cl = SeparableClassicalHamiltonian::harmonic(cfg.m, cfg.omega);
  const PhaseSpaceGrid grid = cfg.grid();
  ClassicalWavefunction psi = gaussian_wavefunction(grid, cfg.q_center, cfg.p_center, cfg.sigma_q, cfg.sigma_p);

  DoubledHamiltonian doubled = sudarshan_hamiltonian(h_cl, cfg.hbar);
  if (cfg.kind == PerturbationKind::hidden_coupling) {
    doubled.epsilon = cfg.epsilon;
    doubled.perturbation = default_hidden_shape();
  }

  std::vector<std::vector<double>> rows;
  rows.push_back(grid_series_row(0.0, psi, cfg.hbar));
  const long long n = step_count(cfg);
  const long long stride = cfg.sample_stride;
  for (long long k = 0; k < n; k += stride) {
    const long long chunk = std::min(stride, n - k);
    psi = evolve_doubled(doubled, psi, chunk * cfg.dt, cfg.dt);
    rows.push_back(grid_series_row((k + chunk) * cfg.dt, psi, cfg.hbar));
  }

  const double norm_drift = std::abs(psi.norm() - 1.0);
  report.metrics["norm_drift"] = norm_drift;
  report.metrics["final_Q_mean"] = rows.back()[5];
  report.metrics["final_P_mean"] = rows.back()[6];
  report.checks.push_back(make_check("norm_drift", norm_drift, 1e-10, "<", norm_drift < 1e-10));

  if (wants(cfg, "csv")) {
    const std::string path = dir + "/doubled_series.csv";
    write_series_csv(path, series_columns(), rows);
    report.series_files.push_back(path);
  }
  if (wants(cfg, "binary")) write_snapshot(dir + "/doubled_final.snap", psi, cfg.t_final, cfg.hbar);
}

std::string lambda_label(double lambda) {
  if (std::isinf(lambda)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", lambda);
  return buf;
}

void run_stabilizer(const ExperimentConfig& cfg, const std::string& dir, RunReport& report) {
  std::vector<double> lambdas = {5.0, 10.0, 20.0, 40.0, 80.0, std::numeric_limits<double>::infinity()};
  if (cfg.kind == PerturbationKind::quartic_stabilizer && !std::isinf(cfg.lambda) &&
      std::find(lambdas.begin(), lambdas.end(), cfg.lambda) == lambdas.end()) {
    lambdas.push_back(cfg.lambda);
    std::sort(lambdas.begin(), lambdas.end());
  }

  const std::complex<double> alpha1{cfg.alpha1_re, cfg.alpha1_im};
  const std::complex<double> alpha2{cfg.alpha2_re, cfg.alpha2_im};
  const auto points = stabilizer_scan(alpha1, alpha2, lambdas, cfg.t_final, cfg.n_trunc);

  bool monotone = true;
  for (std::size_t k = 0; k + 1 < points.size(); ++k)
    if (points[k].metric < points[k + 1].metric) monotone = false;
  double at_inf = 0.0;
  for (const auto& point : points) {
    report.metrics["deviation_lambda_" + lambda_label(point.parameter)] = point.metric;
    if (std::isinf(point.parameter)) at_inf = point.metric;
  }

  report.checks.push_back(make_check("deviation_at_inf", at_inf, 1e-10, "<", at_inf < 1e-10));
  report.checks.push_back(make_check("deviation_monotone", monotone ? 1.0 : 0.0, 1.0, "==", monotone));

  if (wants(cfg, "csv")) {
    const std::string path = dir + "/stabilizer_scan.csv";
    write_scan_csv(path, points);
    report.series_files.push_back(path);
  }
}

void run_deformation(const ExperimentConfig& cfg, const std::string& dir, RunReport& report) {
  std::vector<double> epsilons = {0.0, 0.01, 0.05, 0.1};
  if (cfg.kind == PerturbationKind::hidden_coupling &&
      std::find(epsilons.begin(), epsilons.end(), cfg.epsilon) == epsilons.end()) {
    epsilons.push_back(cfg.epsilon);
    std::sort(epsilons.begin(), epsilons.end());
  }

  const auto h_cl = SeparableClassicalHamiltonian::harmonic(cfg.m, cfg.omega);
  const PhaseSpaceGrid grid = cfg.grid();
  const ClassicalWavefunction psi0 =
      gaussian_wavefunction(grid, cfg.q_center, cfg.p_center, cfg.sigma_q, cfg.sigma_p);
  PerturbationSpec base = cfg.perturbation();
  base.kind = PerturbationKind::hidden_coupling;

  const auto points = deformation_scan(h_cl, psi0, config_density(cfg), base, epsilons, cfg.t_final, cfg.dt);

  bool increasing = true;
  for (std::size_t k = 0; k + 1 < points.size(); ++k)
    if (points[k].metric >= points[k + 1].metric) increasing = false;
  double baseline = points.front().metric;
  for (const auto& point : points) {
    char key[48];
    std::snprintf(key, sizeof(key), "violation_eps_%g", point.parameter);
    report.metrics[key] = point.metric;
  }

  report.checks.push_back(make_check("baseline_violation", baseline, 1e-6, "<", baseline < 1e-6));
  report.checks.push_back(make_check("violation_increasing", increasing ? 1.0 : 0.0, 1.0, "==", increasing));

  if (wants(cfg, "csv")) {
    const std::string path = dir + "/deformation_scan.csv";
    write_scan_csv(path, points);
    report.series_files.push_back(path);
  }
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string dir = resolve_output_dir(cfg);
  std::filesystem::create_directories(dir);

  RunReport report;
  report.config = cfg;
  switch (cfg.experiment) {
    case ExperimentKind::gaussian: run_gaussian(cfg, dir, report); break;
    case ExperimentKind::kvn: run_kvn(cfg, dir, report); break;
    case ExperimentKind::doubled: run_doubled(cfg, dir, report); break;
    case ExperimentKind::stabilizer: run_stabilizer(cfg, dir, report); break;
    case ExperimentKind::deformation: run_deformation(cfg, dir, report); break;
    case ExperimentKind::verify: report = run_full_verify(cfg); break;
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report_json(dir + "/report.json", report);
  return report;
}

}  // namespace kvnlab
