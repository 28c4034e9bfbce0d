#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "kvnlab/gaussian.hpp"
#include "kvnlab/layout.hpp"

using namespace kvnlab;

namespace {

// Closed-form flow of one oscillator mode, sign = +1 for H = p^2/2m + m w^2 q^2/2,
// sign = -1 for the negated partner.
Eigen::Matrix2d mode_flow(double m, double w, double t, double sign) {
  Eigen::Matrix2d s;
  const double c = std::cos(w * t);
  const double sn = std::sin(w * t) * sign;
  s << c, sn / (m * w), -m * w * sn, c;
  return s;
}

Eigen::Matrix4d pair_flow(double m, double w, double t) {
  Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
  s.topLeftCorner<2, 2>() = mode_flow(m, w, t, 1.0);
  s.bottomRightCorner<2, 2>() = mode_flow(m, w, t, -1.0);
  return s;
}

}  // namespace

TEST_CASE("collective-variable transform is symplectic and maps the pair hamiltonian to mixed form") {
  const double m = 1.7, w = 0.9;
  CanonicalTransform t = qmfs_transform();
  CHECK(t.symplectic_residual() == 0.0);  // entries are powers of two, products are exact
  CHECK_NOTHROW(t.validate());

  QuadraticHamiltonian h = transform_hamiltonian(t, oscillator_pair_hamiltonian(m, w));
  // H' = p P / m + m w^2 q Q in the (q, P, Q, p) ordering: pure cross couplings,
  // each reading m w^2 (resp. 1/m) off the symmetric matrix of (1/2) r^T M r.
  for (int i = 0; i < 4; ++i) CHECK(h.quadratic(i, i) == 0.0);
  CHECK(h.quadratic(0, 2) == doctest::Approx(m * w * w).epsilon(1e-14));
  CHECK(h.quadratic(1, 3) == doctest::Approx(1.0 / m).epsilon(1e-14));
  CHECK(h.quadratic(0, 1) == 0.0);
  CHECK(h.quadratic(2, 3) == 0.0);
  CHECK(h.linear.cwiseAbs().maxCoeff() == 0.0);
  CHECK(h.layout.names[0] == "q");
  CHECK(h.layout.names[3] == "p");
}

TEST_CASE("generator triple of the mixed hamiltonian closes into the classical oscillator") {
  const double m = 2.2, w = 0.6;
  QuadraticHamiltonian h = transform_hamiltonian(qmfs_transform(), oscillator_pair_hamiltonian(m, w));
  GeneratorTriple gen = extract_generator_triple(h);

  CHECK(gen.f.coeff(0, 1) == doctest::Approx(1.0 / m).epsilon(1e-14));
  CHECK(gen.g.coeff(1, 0) == doctest::Approx(m * w * w).epsilon(1e-14));
  CHECK(gen.h.max_abs_coeff() == 0.0);

  IntegrabilityResult res = check_qmfs_integrability(gen);
  REQUIRE(res.closes);
  REQUIRE(res.classical_hamiltonian.has_value());
  const BivariatePolynomial& hcl = *res.classical_hamiltonian;
  for (double q : {-1.3, 0.0, 0.7})
    for (double p : {-0.5, 0.2, 1.9})
      CHECK(hcl(q, p) == doctest::Approx(p * p / (2 * m) + 0.5 * m * w * w * q * q).epsilon(1e-13));
}

TEST_CASE("non-integrable generator pair is rejected") {
  GeneratorTriple gen;
  gen.f = BivariatePolynomial::from_terms({{1, 0, 1.0}});  // f = q, df/dq = 1
  gen.g = BivariatePolynomial::from_terms({{0, 0, 0.0}});  // g = 0, dg/dp = 0
  IntegrabilityResult res = check_qmfs_integrability(gen);
  CHECK_FALSE(res.closes);
  CHECK_FALSE(res.classical_hamiltonian.has_value());
}

TEST_CASE("gaussian evolution matches the closed-form rotation of both modes") {
  const double m = 1.3, w = 0.7;
  QuadraticHamiltonian h = oscillator_pair_hamiltonian(m, w);

  GaussianState s0 = vacuum_state(CanonicalLayout::oscillator_pair());
  s0.mean << 0.8, -0.3, 0.25, 1.1;

  for (double t : {0.1, 0.9, 10.0}) {
    GaussianState st = evolve_gaussian(h, s0, t);
    Eigen::Matrix4d flow = pair_flow(m, w, t);
    CHECK((st.mean - flow * s0.mean).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((st.cov - flow * s0.cov * flow.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_NOTHROW(st.validate());
    // Symplectic congruence keeps det(cov) fixed.
    CHECK(st.cov.determinant() == doctest::Approx(s0.cov.determinant()).epsilon(1e-12));
  }
}

TEST_CASE("conditioning variance agrees with a rejection-sampling estimate") {
  GaussianState s;
  s.layout = CanonicalLayout::oscillator_pair();
  s.mean.setZero();
  s.cov = (s.layout.hbar / 2.0) * Eigen::Matrix4d::Identity();
  s.cov(0, 0) = 2.0;
  s.cov(1, 1) = 1.5;
  s.cov(0, 1) = s.cov(1, 0) = 0.6;
  s.validate();

  const double sigma_m = 0.5;
  MeasurementOutcome out = measure_variable(s, 0, sigma_m);
  CHECK(out.outcome_mean == 0.0);
  CHECK(out.outcome_variance == doctest::Approx(2.0 + sigma_m * sigma_m).epsilon(1e-14));

  // Sample (q1, p1) from the prior, keep draws whose noisy q1 readout lands in a
  // narrow window, and compare the surviving p1 variance with the posterior minus
  // the deterministic kick-back term on the conjugate variable.
  std::mt19937_64 rng(20240817);
  std::normal_distribution<double> unit(0.0, 1.0);
  Eigen::Matrix2d block = s.cov.topLeftCorner<2, 2>();
  Eigen::Matrix2d chol = Eigen::LLT<Eigen::Matrix2d>(block).matrixL();

  const double window = 0.1, readout = 0.3;
  std::vector<double> kept;
  for (int i = 0; i < 400000; ++i) {
    Eigen::Vector2d z(unit(rng), unit(rng));
    Eigen::Vector2d qp = chol * z;
    double r = qp(0) + sigma_m * unit(rng);
    if (std::abs(r - readout) < window) kept.push_back(qp(1));
  }
  REQUIRE(kept.size() > 5000);
  double mean = 0.0;
  for (double v : kept) mean += v;
  mean /= static_cast<double>(kept.size());
  double var = 0.0;
  for (double v : kept) var += (v - mean) * (v - mean);
  var /= static_cast<double>(kept.size() - 1);

  const double hbar = s.layout.hbar;
  const double kick = hbar * hbar / (4.0 * sigma_m * sigma_m);
  CHECK(out.posterior.cov(1, 1) - kick == doctest::Approx(var).epsilon(0.05));
  // Conditioning never touches the other mode.
  CHECK((out.posterior.cov.bottomRightCorner<2, 2>() - s.cov.bottomRightCorner<2, 2>()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("infinitely noisy readout leaves the state alone") {
  GaussianState s = vacuum_state(CanonicalLayout::oscillator_pair());
  s.cov(0, 0) = 1.2;
  s.cov(0, 1) = s.cov(1, 0) = 0.3;
  MeasurementOutcome out = measure_variable(s, 0, 1e7);
  CHECK((out.posterior.cov - s.cov).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((out.posterior.mean - s.mean).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("probing a bare oscillator moves the conjugate variance by kick minus sharpening") {
  // With m w = 1 the vacuum is stationary.  A q1 probe at t_meas does two things:
  // kicks Var(p1) by hbar^2/(4 sigma_m^2) and sharpens Var(q1) by the conditioning
  // term; the oscillator rotates both into Var(p1) at t_final with cos^2 / sin^2.
  const double w = 1.1, m = 1.0 / w, hbar = 1.0;
  const double t_meas = 0.4, t_final = 1.3, sigma_m = 0.8;
  QuadraticHamiltonian h = oscillator_pair_hamiltonian(m, w, hbar);
  GaussianState s0 = vacuum_state(CanonicalLayout::oscillator_pair(hbar));

  double dev = back_action_deviation(h, s0, 0, 1, t_meas, sigma_m, t_final);
  double c = std::cos(w * (t_final - t_meas)), s = std::sin(w * (t_final - t_meas));
  double kick = hbar * hbar / (4.0 * sigma_m * sigma_m);
  double sharpen = (hbar / 2.0) * (hbar / 2.0) / (hbar / 2.0 + sigma_m * sigma_m);
  CHECK(dev == doctest::Approx(std::abs(c * c * kick - s * s * sharpen)).epsilon(1e-12));
}

TEST_CASE("collective-pair probe never kicks its partner") {
  // m w = 1 keeps the classical-sector vacuum stationary and uncorrelated.
  QuadraticHamiltonian mixed = transform_hamiltonian(qmfs_transform(), oscillator_pair_hamiltonian(1.25, 0.8));
  GaussianState s0 = vacuum_state(CanonicalLayout::qmfs());

  // Equal-time probes: q readout leaves Var(p) untouched and vice versa.
  for (double t : {0.7, 2.5}) {
    CHECK(back_action_deviation(mixed, s0, 0, 3, t, 0.4, t) < 1e-13);
    CHECK(back_action_deviation(mixed, s0, 3, 0, t, 0.4, t) < 1e-13);
  }

  // An earlier probe still sharpens the classical sector, and that propagates;
  // what never arrives is the kick term a bare probe would add.
  const double w = 0.8, t_meas = 0.4, t_final = 1.3, sigma_m = 0.8;
  double dev = back_action_deviation(mixed, s0, 0, 3, t_meas, sigma_m, t_final);
  double s = std::sin(w * (t_final - t_meas));
  double sharpen = 0.25 / (0.5 + sigma_m * sigma_m);
  CHECK(dev == doctest::Approx(s * s * sharpen).epsilon(1e-12));
}

TEST_CASE("covariance below the uncertainty floor is rejected") {
  GaussianState s = vacuum_state(CanonicalLayout::oscillator_pair());
  s.cov(0, 0) = s.cov(1, 1) = 0.1;  // symplectic eigenvalue 0.1 < hbar/2
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  CHECK(s.uncertainty_floor() < 0.0);
}

TEST_CASE("constructor guards on the hamiltonian factory") {
  CHECK_THROWS_AS(oscillator_pair_hamiltonian(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(oscillator_pair_hamiltonian(1.0, 0.0), std::invalid_argument);
  // make() symmetrizes raw quadratic input.
  Eigen::Matrix4d raw = Eigen::Matrix4d::Zero();
  raw(0, 2) = 2.0;
  QuadraticHamiltonian h = QuadraticHamiltonian::make(raw, Eigen::Vector4d::Zero(), 0.0, CanonicalLayout::qmfs());
  CHECK(h.quadratic(0, 2) == 1.0);
  CHECK(h.quadratic(2, 0) == 1.0);
}
