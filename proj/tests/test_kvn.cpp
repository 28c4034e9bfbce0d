#include "doctest.h"

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "kvnlab/fields.hpp"
#include "kvnlab/kvn.hpp"
#include "kvnlab/phase_grid.hpp"

using namespace kvnlab;

namespace {

PhaseSpaceGrid small_grid(int n) {
  PhaseSpaceGrid g;
  g.nq = g.np = n;
  return g;  // [-8, 8)^2 defaults
}

const double kPeriod = 2.0 * M_PI;

}  // namespace

TEST_CASE("liouville generator acts on a plane wave as the classical symbol") {
  PhaseSpaceGrid g = small_grid(128);
  const double kq = 3.0 * 2.0 * M_PI / 16.0;
  const double kp = -2.0 * 2.0 * M_PI / 16.0;
  ClassicalWavefunction psi = plane_wave(g, kq, kp);
  SeparableClassicalHamiltonian h = SeparableClassicalHamiltonian::harmonic();

  Eigen::MatrixXcd lp = liouville_apply(h, psi);
  // For exp(i(kq q + kp p)): L psi = -(V'(q) kp - T'(p) kq) psi.
  for (int i = 0; i < g.nq; i += 17) {
    for (int j = 0; j < g.np; j += 13) {
      std::complex<double> want = -(g.q(i) * kp - g.p(j) * kq) * psi.values(i, j);
      CHECK(std::abs(lp(i, j) - want) < 1e-12);
    }
  }
}

TEST_CASE("free-particle splitting is exact shear transport") {
  PhaseSpaceGrid g = small_grid(128);
  const double m = 1.4, dt = 0.01;
  const int n_steps = 24;
  const double q0 = 0.5, s = 0.65;
  SeparableClassicalHamiltonian h = SeparableClassicalHamiltonian::free_particle(m);

  ClassicalWavefunction psi = gaussian_wavefunction(g, q0, 0.0, s, s);
  SplitStepper stepper(h, g, dt);
  stepper.run(psi, n_steps);

  const double t = n_steps * dt;
  const double amp = 1.0 / std::sqrt(2.0 * M_PI * s * s);
  double worst = 0.0;
  for (int i = 0; i < g.nq; ++i) {
    for (int j = 0; j < g.np; ++j) {
      double qq = g.q(i) - g.p(j) * t / m - q0;
      double pp = g.p(j);
      double want = amp * std::exp(-(qq * qq + pp * pp) / (4.0 * s * s));
      worst = std::max(worst, std::abs(psi.values(i, j) - std::complex<double>(want, 0.0)));
    }
  }
  CHECK(worst < 1e-9);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-13);
}

TEST_CASE("quarter-period harmonic evolution rotates the packet center") {
  PhaseSpaceGrid g = small_grid(128);
  SeparableClassicalHamiltonian h = SeparableClassicalHamiltonian::harmonic();
  ClassicalWavefunction psi = gaussian_wavefunction(g, 2.0, 0.0, 0.65, 0.65);

  const double dt = kPeriod / 2000.0;
  SplitStepper stepper(h, g, dt);
  stepper.run(psi, 500);  // t = T/4: (2, 0) -> (0, -2)

  auto q_mean = expectation(psi, BivariatePolynomial::from_terms({{1, 0, 1.0}}));
  auto p_mean = expectation(psi, BivariatePolynomial::from_terms({{0, 1, 1.0}}));
  CHECK(std::abs(q_mean - 0.0) < 5e-3);
  CHECK(std::abs(p_mean - (-2.0)) < 5e-3);

  Eigen::Index imax = 0, jmax = 0;
  psi.density().maxCoeff(&imax, &jmax);
  CHECK(std::abs(g.q(imax) - 0.0) <= g.dq());
  CHECK(std::abs(g.p(jmax) + 2.0) <= g.dp());
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  CHECK(stepper.max_boundary_tail() < 1e-9);
}

TEST_CASE("characteristics flow reproduces the oscillator orbit both ways in time") {
  const double m = 0.8, w = 1.3;
  SeparableClassicalHamiltonian h;
  h.kinetic = Polynomial::monomial(2, 0.5 / m);
  h.potential = Polynomial::monomial(2, 0.5 * m * w * w);

  const double q0 = 1.1, p0 = -0.4;
  for (double t : {3.7, -1.2}) {
    auto [q, p] = characteristics_flow(h, q0, p0, t);
    double qe = q0 * std::cos(w * t) + p0 / (m * w) * std::sin(w * t);
    double pe = -m * w * q0 * std::sin(w * t) + p0 * std::cos(w * t);
    CHECK(std::abs(q - qe) < 1e-9);
    CHECK(std::abs(p - pe) < 1e-9);
    CHECK(std::abs(h(q, p) - h(q0, p0)) < 1e-10);  // energy along the orbit
  }
}

TEST_CASE("transport oracle matches the rigid phase-space rotation") {
  PhaseSpaceGrid g = small_grid(64);
  SeparableClassicalHamiltonian h = SeparableClassicalHamiltonian::harmonic();
  const double s = 0.7, t = 0.9;
  auto rho0 = [s](double q, double p) {
    double dq = q - 1.0;
    return std::exp(-(dq * dq + p * p) / (2.0 * s * s)) / (2.0 * M_PI * s * s);
  };

  Eigen::MatrixXd rho = transport_density_oracle(h, rho0, g, t);
  double worst = 0.0;
  for (int i = 0; i < g.nq; ++i) {
    for (int j = 0; j < g.np; ++j) {
      // Backward flow of m = omega = 1 is rotation by -t.
      double qb = g.q(i) * std::cos(t) - g.p(j) * std::sin(t);
      double pb = g.q(i) * std::sin(t) + g.p(j) * std::cos(t);
      worst = std::max(worst, std::abs(rho(i, j) - rho0(qb, pb)));
    }
  }
  CHECK(worst < 1e-9);
  CHECK(std::abs(rho.sum() * g.cell() - 1.0) < 1e-8);  // mass is carried along
}

TEST_CASE("grid propagator tracks the characteristics oracle and converges at second order") {
  PhaseSpaceGrid g = small_grid(64);
  SeparableClassicalHamiltonian h = SeparableClassicalHamiltonian::harmonic();
  const double q0 = 0.5, s = 0.65, t = 0.1 * kPeriod;
  auto rho0 = [&](double q, double p) {
    double dq = q - q0;
    return std::exp(-(dq * dq + p * p) / (2.0 * s * s)) / (2.0 * M_PI * s * s);
  };
  Eigen::MatrixXd oracle = transport_density_oracle(h, rho0, g, t);

  auto run = [&](int n_steps) {
    ClassicalWavefunction psi = gaussian_wavefunction(g, q0, 0.0, s, s);
    SplitStepper stepper(h, g, t / n_steps);
    stepper.run(psi, n_steps);
    return l2_density_distance(psi.density(), oracle, g);
  };

  double coarse = run(200);
  double fine = run(400);
  CHECK(coarse < 1e-6);
  double ratio = coarse / fine;
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);
}

TEST_CASE("a density that depends only on energy does not move") {
  PhaseSpaceGrid g = small_grid(64);
  SeparableClassicalHamiltonian h = SeparableClassicalHamiltonian::harmonic();
  // |psi|^2 = exp(-(q^2 + p^2)) is a function of H_cl alone.
  const double s = std::sqrt(0.5);
  ClassicalWavefunction psi = gaussian_wavefunction(g, 0.0, 0.0, s, s);
  Eigen::MatrixXd before = psi.density();

  SplitStepper stepper(h, g, kPeriod / 2000.0);
  stepper.run(psi, 300);
  CHECK(l2_density_distance(psi.density(), before, g) < 1e-6);

  BivariatePolynomial hcl = BivariatePolynomial::in_p(h.kinetic) + BivariatePolynomial::in_q(h.potential);
  CHECK(expectation(psi, hcl) == doctest::Approx(0.5).epsilon(1e-6));  // <H> of the thermal-like state
}

TEST_CASE("long runs on a rough field stay unitary") {
  PhaseSpaceGrid g = small_grid(64);
  SeparableClassicalHamiltonian h = SeparableClassicalHamiltonian::harmonic();
  ClassicalWavefunction psi = random_band_limited_field(g, 8, 7);
  SplitStepper stepper(h, g, kPeriod / 500.0);
  stepper.run(psi, 1000);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
}

TEST_CASE("single-step wrapper agrees with a stepper instance") {
  PhaseSpaceGrid g = small_grid(64);
  SeparableClassicalHamiltonian h = SeparableClassicalHamiltonian::harmonic();
  ClassicalWavefunction a = gaussian_wavefunction(g, 0.5, -0.3, 0.7, 0.6);
  ClassicalWavefunction b = a;

  ClassicalWavefunction stepped = kvn_step(h, a, 0.01);
  SplitStepper stepper(h, g, 0.01);
  stepper.step(b);
  CHECK((stepped.values - b.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the transported density is blind to an initial phase") {
  PhaseSpaceGrid g = small_grid(64);
  SeparableClassicalHamiltonian h = SeparableClassicalHamiltonian::harmonic();
  ClassicalWavefunction psi = gaussian_wavefunction(g, 0.5, 0.0, 0.65, 0.65);
  auto theta = [](double q, double p) { return 0.5 * std::sin(M_PI * q / 8.0) * std::cos(M_PI * p / 8.0); };
  CHECK(phase_decoupling_error(h, psi, theta, 50, kPeriod / 200.0) < 1e-10);
}

TEST_CASE("gaussian packet moments and both expectation routes") {
  PhaseSpaceGrid g = small_grid(128);
  const double q0 = 0.5, p0 = -0.25, sq = 0.65, sp = 0.8;
  ClassicalWavefunction psi = gaussian_wavefunction(g, q0, p0, sq, sp);

  CHECK(std::abs(psi.norm() - 1.0) < 1e-13);
  CHECK(expectation(psi, BivariatePolynomial::from_terms({{1, 0, 1.0}})) == doctest::Approx(q0).epsilon(1e-10));
  CHECK(expectation(psi, BivariatePolynomial::from_terms({{0, 1, 1.0}})) == doctest::Approx(p0).epsilon(1e-10));
  double q_sq = expectation(psi, BivariatePolynomial::from_terms({{2, 0, 1.0}}));
  double p_sq = expectation(psi, BivariatePolynomial::from_terms({{0, 2, 1.0}}));
  CHECK(q_sq - q0 * q0 == doctest::Approx(sq * sq).epsilon(1e-10));
  CHECK(p_sq - p0 * p0 == doctest::Approx(sp * sp).epsilon(1e-10));

  BivariatePolynomial f = BivariatePolynomial::from_terms({{1, 2, 1.0}});
  auto lam = [](double q, double p) { return q * p * p; };
  CHECK(expectation(psi, f) == doctest::Approx(expectation(psi, lam)).epsilon(1e-12));
  CHECK_THROWS_AS(expectation(psi, std::function<double(double, double)>{}), std::invalid_argument);
}

TEST_CASE("grid validation rejects malformed domains") {
  PhaseSpaceGrid g;
  g.nq = 100;  // not a power of two
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g.nq = 4;  // below the minimum
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = PhaseSpaceGrid{};
  g.q_min = 3.0;
  g.q_max = -3.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
