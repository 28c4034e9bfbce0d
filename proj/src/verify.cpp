#include "kvnlab/verify.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "kvnlab/fields.hpp"
#include "kvnlab/fock.hpp"
#include "kvnlab/gaussian.hpp"
#include "kvnlab/perturbation.hpp"
#include "kvnlab/sudarshan.hpp"

namespace kvnlab {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double elapsed() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

PhaseSpaceGrid square_grid(int n) {
  PhaseSpaceGrid g;
  g.nq = n;
  g.np = n;
  g.q_min = -8.0;
  g.q_max = 8.0;
  g.p_min = -8.0;
  g.p_max = 8.0;
  return g;
}

std::function<double(double, double)> gaussian_density(double q0, double p0, double sq, double sp) {
  const double norm = 1.0 / (2.0 * M_PI * sq * sp);
  return [=](double q, double p) {
    const double dq = (q - q0) / sq, dp = (p - p0) / sp;
    return norm * std::exp(-0.5 * (dq * dq + dp * dp));
  };
}

// 1. S Omega S^T = Omega; transformed pair Hamiltonian has no sector self-couplings.
CheckResult criterion_symplectic(const ExperimentConfig& cfg) {
  Timer timer;
  const CanonicalTransform s = qmfs_transform(cfg.hbar);
  const double residual = s.symplectic_residual();
  const QuadraticHamiltonian doubled = oscillator_pair_hamiltonian(cfg.m, cfg.omega, cfg.hbar);
  const QuadraticHamiltonian mixed = transform_hamiltonian(s, doubled);
  double diag = 0.0;
  for (int k = 0; k < 4; ++k) diag = std::max(diag, std::abs(mixed.quadratic(k, k)));

  CheckResult out;
  out.id = 1;
  out.name = "symplectic_transform";
  out.measured = residual;
  out.threshold = 1e-12;
  out.relation = "<";
  out.passed = residual < 1e-12 && diag == 0.0;
  out.detail = "max self-coupling magnitude " + fmt(diag) + " (must be exactly 0)";
  out.runtime_seconds = timer.elapsed();
  return out;
}

// 2. <q>, <p> of the mixed-form generator track the classical flow for 10 periods.
CheckResult criterion_classicality(const ExperimentConfig& cfg) {
  Timer timer;
  const CanonicalTransform s = qmfs_transform(cfg.hbar);
  const QuadraticHamiltonian mixed = transform_hamiltonian(s, oscillator_pair_hamiltonian(cfg.m, cfg.omega, cfg.hbar));
  GaussianState g0 = vacuum_state(CanonicalLayout::qmfs(cfg.hbar));
  g0.mean << 1.0, 0.3, -0.2, 0.5;  // nonzero hidden components on purpose

  const auto h_cl = SeparableClassicalHamiltonian::harmonic(cfg.m, cfg.omega);
  const int n_samples = 400;
  const double t_total = 10.0 * cfg.period();
  const double flow_step = 2.0 * M_PI * 1e-4 / cfg.omega;

  double worst = 0.0;
  double qc = g0.mean(0), pc = g0.mean(3);
  for (int k = 1; k <= n_samples; ++k) {
    const double t = t_total * k / n_samples;
    const GaussianState gt = evolve_gaussian(mixed, g0, t);
    std::tie(qc, pc) = characteristics_flow(h_cl, qc, pc, t_total / n_samples, flow_step);
    worst = std::max({worst, std::abs(gt.mean(0) - qc), std::abs(gt.mean(3) - pc)});
  }

  CheckResult out;
  out.id = 2;
  out.name = "qmfs_classicality";
  out.measured = worst;
  out.threshold = 1e-10;
  out.relation = "<";
  out.passed = worst < out.threshold;
  out.detail = "max |<q>,<p>| deviation from classical flow over 10 periods";
  out.runtime_seconds = timer.elapsed();
  return out;
}

// 3. q-probe leaves the p marginal alone; q1-probe kicks Var(p1) by hbar^2/(4 sigma_m^2).
CheckResult criterion_back_action(const ExperimentConfig& cfg) {
  Timer timer;
  const CanonicalTransform s = qmfs_transform(cfg.hbar);
  const QuadraticHamiltonian mixed = transform_hamiltonian(s, oscillator_pair_hamiltonian(cfg.m, cfg.omega, cfg.hbar));
  const GaussianState g0 = vacuum_state(CanonicalLayout::qmfs(cfg.hbar));
  const GaussianState bare0 = vacuum_state(CanonicalLayout::oscillator_pair(cfg.hbar));

  double worst = 0.0;
  for (double sigma_m : {0.1, 1.0, 10.0}) {
    worst = std::max(worst, back_action_deviation(mixed, g0, 0, 3, 1.0, sigma_m, 1.0));

    const MeasurementOutcome probed = measure_variable(bare0, 0, sigma_m);
    const double shift = probed.posterior.cov(1, 1) - bare0.cov(1, 1);
    const double expected = cfg.hbar * cfg.hbar / (4.0 * sigma_m * sigma_m);
    worst = std::max(worst, std::abs(shift - expected));
  }

  CheckResult out;
  out.id = 3;
  out.name = "back_action_evasion";
  out.measured = worst;
  out.threshold = 1e-12;
  out.relation = "<";
  out.passed = worst < out.threshold;
  out.detail = "worst case over sigma_m in {0.1, 1, 10}, probe and positive control";
  out.runtime_seconds = timer.elapsed();
  return out;
}

// 4. One-period grid propagation vs. exact transport; second-order dt ratio.
CheckResult criterion_kvn_oracle(const ExperimentConfig& cfg) {
  Timer timer;
  const auto h_cl = SeparableClassicalHamiltonian::harmonic(cfg.m, cfg.omega);
  const PhaseSpaceGrid grid = square_grid(256);
  const ClassicalWavefunction psi0 =
      gaussian_wavefunction(grid, cfg.q_center, cfg.p_center, cfg.sigma_q, cfg.sigma_p);
  const auto rho0 = gaussian_density(cfg.q_center, cfg.p_center, cfg.sigma_q, cfg.sigma_p);

  const double period = cfg.period();
  const Eigen::MatrixXd reference = transport_density_oracle(h_cl, rho0, grid, period);

  ClassicalWavefunction coarse = psi0;
  SplitStepper(h_cl, grid, period / 2000.0).run(coarse, 2000);
  const double err_coarse = l2_density_distance(coarse.density(), reference, grid);

  ClassicalWavefunction fine = psi0;
  SplitStepper(h_cl, grid, period / 4000.0).run(fine, 4000);
  const double err_fine = l2_density_distance(fine.density(), reference, grid);
  const double ratio = err_coarse / err_fine;

  CheckResult out;
  out.id = 4;
  out.name = "kvn_vs_characteristics";
  out.measured = err_coarse;
  out.threshold = 1e-6;
  out.relation = "<";
  out.passed = err_coarse < out.threshold && ratio > 3.0 && ratio < 5.0;
  out.detail = "halved-dt error " + fmt(err_fine) + ", improvement ratio " + fmt(ratio) + " (needs (3, 5))";
  out.runtime_seconds = timer.elapsed();
  return out;
}

// 5. Doubled generator application equals hbar * Liouvillian; evolutions coincide.
CheckResult criterion_doubling_identity(const ExperimentConfig& cfg) {
  Timer timer;
  const auto h_cl = SeparableClassicalHamiltonian::harmonic(cfg.m, cfg.omega);
  const DoubledHamiltonian doubled = sudarshan_hamiltonian(h_cl, cfg.hbar);
  const PhaseSpaceGrid grid = square_grid(128);

  double worst_op = 0.0;
  for (int k = 0; k < 20; ++k) {
    const ClassicalWavefunction psi = random_band_limited_field(grid, 10, cfg.seed + k);
    const Eigen::MatrixXcd lhs = apply_doubled_hamiltonian(doubled, psi);
    const Eigen::MatrixXcd rhs = cfg.hbar * liouville_apply(h_cl, psi);
    worst_op = std::max(worst_op, (lhs - rhs).cwiseAbs().maxCoeff());
  }

  const double dt = cfg.period() / 2000.0;
  const ClassicalWavefunction psi0 =
      gaussian_wavefunction(grid, cfg.q_center, cfg.p_center, cfg.sigma_q, cfg.sigma_p);
  const ClassicalWavefunction via_doubled = evolve_doubled(doubled, psi0, 500.0 * dt, dt);
  ClassicalWavefunction via_kvn = psi0;
  for (int step = 0; step < 500; ++step) via_kvn = kvn_step(h_cl, via_kvn, dt);
  const double worst_evolution = (via_doubled.values - via_kvn.values).cwiseAbs().maxCoeff();

  CheckResult out;
  out.id = 5;
  out.name = "sudarshan_identity";
  out.measured = std::max(worst_op, worst_evolution);
  out.threshold = 1e-12;
  out.relation = "<";
  out.passed = out.measured < out.threshold;
  out.detail = "operator residual " + fmt(worst_op) + " on 20 fields, 500-step residual " + fmt(worst_evolution);
  out.runtime_seconds = timer.elapsed();
  return out;
}

// 6. Phases are unobservable: expectation identity, density decoupling, Q rejected.
CheckResult criterion_superselection(const ExperimentConfig& cfg) {
  Timer timer;
  const PhaseSpaceGrid grid = square_grid(256);
  const auto theta = [](double q, double p) { return std::sin(M_PI * q / 8.0) * std::cos(M_PI * p / 8.0); };

  const ClassicalWavefunction random_field = random_band_limited_field(grid, 10, cfg.seed + 100);
  HiddenMonomial qp2;
  qp2.coeff = 1.0;
  qp2.q_pow = 1;
  qp2.p_pow = 2;
  const double residual = superselection_residual(random_field, HiddenOperator::from_terms({qp2}), theta);

  bool rejected = false;
  try {
    superselection_residual(random_field, HiddenOperator::symbol('Q'), theta);
  } catch (const std::invalid_argument&) {
    rejected = true;
  }

  const auto h_cl = SeparableClassicalHamiltonian::harmonic(cfg.m, cfg.omega);
  const ClassicalWavefunction psi0 =
      gaussian_wavefunction(grid, cfg.q_center, cfg.p_center, cfg.sigma_q, cfg.sigma_p);
  const double decoupling = phase_decoupling_error(h_cl, psi0, theta, 200, cfg.period() / 200.0);

  CheckResult out;
  out.id = 6;
  out.name = "superselection";
  out.measured = std::max(residual, decoupling);
  out.threshold = 1e-8;
  out.relation = "<=";
  out.passed = residual < 1e-12 && decoupling <= 1e-8 && rejected;
  out.detail = "expectation residual " + fmt(residual) + " (needs < 1e-12), density decoupling " +
               fmt(decoupling) + ", hidden observable rejected: " + (rejected ? "yes" : "no");
  out.runtime_seconds = timer.elapsed();
  return out;
}

// 7. Canonical commutators of the doubled algebra on a localized field.
CheckResult criterion_commutators(const ExperimentConfig& cfg) {
  Timer timer;
  const PhaseSpaceGrid grid = square_grid(256);
  const ClassicalWavefunction psi = gaussian_wavefunction(grid, 0.0, 0.0, 0.7, 0.7);
  const std::complex<double> i_hbar{0.0, cfg.hbar};

  auto apply = [&](char symbol, const Eigen::MatrixXcd& v) {
    ClassicalWavefunction field;
    field.grid = grid;
    field.values = v;
    return apply_hidden_operator(HiddenOperator::symbol(symbol), field, cfg.hbar);
  };
  auto commutator = [&](char a, char b) {
    return (apply(a, apply(b, psi.values)) - apply(b, apply(a, psi.values))).eval();
  };

  double worst = 0.0;
  worst = std::max(worst, (commutator('q', 'P') - i_hbar * psi.values).cwiseAbs().maxCoeff());
  worst = std::max(worst, (commutator('Q', 'p') - i_hbar * psi.values).cwiseAbs().maxCoeff());
  worst = std::max(worst, commutator('q', 'p').cwiseAbs().maxCoeff());
  worst = std::max(worst, commutator('Q', 'P').cwiseAbs().maxCoeff());
  worst = std::max(worst, commutator('q', 'Q').cwiseAbs().maxCoeff());
  worst = std::max(worst, commutator('p', 'P').cwiseAbs().maxCoeff());

  CheckResult out;
  out.id = 7;
  out.name = "commutator_suite";
  out.measured = worst;
  out.threshold = 1e-9;
  out.relation = "<";
  out.passed = worst < out.threshold;
  out.detail = "worst of the six canonical commutator residuals";
  out.runtime_seconds = timer.elapsed();
  return out;
}

// 8. Quartic stabilizer: vanishing deviation at lambda = inf, monotone in lambda,
// mode-2 eigenstates feel only a global phase.
CheckResult criterion_stabilizer(const ExperimentConfig& cfg) {
  Timer timer;
  const std::complex<double> alpha1{cfg.alpha1_re, cfg.alpha1_im};
  const std::complex<double> alpha2{cfg.alpha2_re, cfg.alpha2_im};
  const double inf = std::numeric_limits<double>::infinity();
  const double t_final = 2.0 * cfg.period();

  const auto deviation =
      stabilizer_deviation(alpha1, alpha2, {5.0, 10.0, 20.0, 40.0, 80.0, inf}, t_final, cfg.n_trunc);
  const double at_inf = deviation.at(inf);
  bool monotone = true;
  const double ladder[] = {5.0, 10.0, 20.0, 40.0, 80.0};
  for (int k = 0; k + 1 < 5; ++k)
    if (deviation.at(ladder[k]) < deviation.at(ladder[k + 1])) monotone = false;

  // neutrality: vacuum mode 2 turns the stabilizer into a global phase
  const FockPairState eigen0 = coherent_pair_state(alpha1, 0.0, cfg.n_trunc, cfg.m, cfg.omega, cfg.hbar);
  double neutrality = 0.0;
  for (int k = 0; k <= 80; ++k) {
    const double t = t_final * k / 80.0;
    const PairMoments with = pair_moments(evolve_fock(eigen0, 5.0, t));
    const PairMoments without = pair_moments(evolve_fock(eigen0, inf, t));
    neutrality = std::max({neutrality, std::abs(with.q_mean - without.q_mean),
                           std::abs(with.p_mean - without.p_mean), std::abs(with.q_var - without.q_var),
                           std::abs(with.p_var - without.p_var)});
  }

  CheckResult out;
  out.id = 8;
  out.name = "quartic_stabilizer";
  out.measured = at_inf;
  out.threshold = 1e-10;
  out.relation = "<";
  out.passed = at_inf < 1e-10 && monotone && neutrality < 1e-12;
  out.detail = std::string("deviation non-increasing over lambda {5..80}: ") + (monotone ? "yes" : "no") +
               ", eigenstate neutrality " + fmt(neutrality) + ", D(5) " + fmt(deviation.at(5.0));
  out.runtime_seconds = timer.elapsed();
  return out;
}

// 9. Hidden-sector deformation: baseline splitting error at eps = 0, strictly
// growing violation along the eps ladder.
CheckResult criterion_deformation(const ExperimentConfig& cfg) {
  Timer timer;
  const auto h_cl = SeparableClassicalHamiltonian::harmonic(cfg.m, cfg.omega);
  const PhaseSpaceGrid grid = square_grid(128);
  const ClassicalWavefunction psi0 =
      gaussian_wavefunction(grid, cfg.q_center, cfg.p_center, cfg.sigma_q, cfg.sigma_p);
  const auto rho0 = gaussian_density(cfg.q_center, cfg.p_center, cfg.sigma_q, cfg.sigma_p);

  const double period = cfg.period();
  const double dt = period / 2000.0;
  const Eigen::MatrixXd reference = transport_density_oracle(h_cl, rho0, grid, period);

  const double ladder[] = {0.0, 0.01, 0.05, 0.1};
  double violation[4];
  for (int k = 0; k < 4; ++k) {
    DoubledHamiltonian doubled = sudarshan_hamiltonian(h_cl, cfg.hbar);
    doubled.epsilon = ladder[k];
    doubled.perturbation = default_hidden_shape();
    const ClassicalWavefunction evolved = evolve_doubled(doubled, psi0, period, dt);
    violation[k] = l2_density_distance(evolved.density(), reference, grid);
  }
  const bool increasing = violation[0] < violation[1] && violation[1] < violation[2] && violation[2] < violation[3];

  CheckResult out;
  out.id = 9;
  out.name = "deformation_classicality";
  out.measured = violation[0];
  out.threshold = 1e-6;
  out.relation = "<";
  out.passed = violation[0] < out.threshold && increasing;
  out.detail = "violations " + fmt(violation[0]) + " -> " + fmt(violation[1]) + " -> " + fmt(violation[2]) +
               " -> " + fmt(violation[3]) + ", strictly increasing: " + (increasing ? "yes" : "no");
  out.runtime_seconds = timer.elapsed();
  return out;
}

std::string checks_canonical(const std::vector<CheckResult>& checks) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& check : checks) {
    nlohmann::json one = check_to_json(check);
    one.erase("runtime_seconds");
    j.push_back(one);
  }
  return j.dump();
}

}  // namespace

std::vector<CheckResult> run_verify_pass(const ExperimentConfig& cfg) {
  std::vector<CheckResult> checks;
  checks.push_back(criterion_symplectic(cfg));
  checks.push_back(criterion_classicality(cfg));
  checks.push_back(criterion_back_action(cfg));
  checks.push_back(criterion_kvn_oracle(cfg));
  checks.push_back(criterion_doubling_identity(cfg));
  checks.push_back(criterion_superselection(cfg));
  checks.push_back(criterion_commutators(cfg));
  checks.push_back(criterion_stabilizer(cfg));
  checks.push_back(criterion_deformation(cfg));
  return checks;
}

RunReport run_full_verify(const ExperimentConfig& cfg) {
  Timer total;
  std::vector<CheckResult> first = run_verify_pass(cfg);
  std::vector<CheckResult> second = run_verify_pass(cfg);
  const bool identical = checks_canonical(first) == checks_canonical(second);
  const double seconds = total.elapsed();

  CheckResult determinism;
  determinism.id = 10;
  determinism.name = "determinism";
  determinism.measured = identical ? 0.0 : 1.0;
  determinism.threshold = 1.0;
  determinism.relation = "<";
  determinism.passed = identical && seconds < 300.0;
  determinism.detail = std::string("two passes byte-identical: ") + (identical ? "yes" : "no") +
                       (seconds < 300.0 ? "; both passes under 300 s" : "; passes exceeded 300 s");
  determinism.runtime_seconds = seconds;

  RunReport report;
  report.config = cfg;
  report.checks = std::move(first);
  for (const auto& check : report.checks)
    report.metrics["criterion_" + std::to_string(check.id)] = check.measured;
  report.checks.push_back(determinism);
  report.runtime_seconds = seconds;
  return report;
}

}  // namespace kvnlab
