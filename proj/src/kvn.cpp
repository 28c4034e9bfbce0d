#include "kvnlab/kvn.hpp"

#include <cmath>
#include <stdexcept>

namespace kvnlab {

Eigen::MatrixXcd liouville_apply(const SeparableClassicalHamiltonian& h, const ClassicalWavefunction& psi) {
  FourierWorkspace w(psi.grid);
  const Polynomial dv = h.potential.derivative();
  const Polynomial dt_dp = h.kinetic.derivative();
  Eigen::MatrixXcd dpsi_dp = spectral_d_dp(w, psi.values);
  Eigen::MatrixXcd dpsi_dq = spectral_d_dq(w, psi.values);
  Eigen::MatrixXcd out(psi.grid.nq, psi.grid.np);
  const std::complex<double> im(0.0, 1.0);
  for (int j = 0; j < psi.grid.np; ++j) {
    const double tp = dt_dp(psi.grid.p(j));
    for (int i = 0; i < psi.grid.nq; ++i) {
      out(i, j) = im * (dv(psi.grid.q(i)) * dpsi_dp(i, j) - tp * dpsi_dq(i, j));
    }
  }
  return out;
}

SplitStepper::SplitStepper(const SeparableClassicalHamiltonian& h, const PhaseSpaceGrid& grid, double dt)
    : grid_(grid), dt_(dt), workspace_(grid) {
  if (!(dt > 0.0)) throw std::invalid_argument("SplitStepper: time step must be positive");
  const Polynomial dt_dp = h.kinetic.derivative();
  const Polynomial dv_dq = h.potential.derivative();
  kinetic_half_.resize(grid.nq, grid.np);
  potential_full_.resize(grid.nq, grid.np);
  for (int j = 0; j < grid.np; ++j) {
    const double shift = dt_dp(grid.p(j)) * dt / 2.0;
    for (int i = 0; i < grid.nq; ++i)
      kinetic_half_(i, j) = std::polar(1.0 / grid.nq, -grid.freq_q(i) * shift);
  }
  for (int i = 0; i < grid.nq; ++i) {
    const double shift = dv_dq(grid.q(i)) * dt;
    for (int j = 0; j < grid.np; ++j)
      potential_full_(i, j) = std::polar(1.0 / grid.np, grid.freq_p(j) * shift);
  }
}

void SplitStepper::step(ClassicalWavefunction& psi) {
  if (!(psi.grid == grid_)) throw std::invalid_argument("SplitStepper: wavefunction grid mismatch");
  workspace_.forward_q(psi.values);
  psi.values.array() *= kinetic_half_.array();
  workspace_.backward_q(psi.values);

  workspace_.forward_p(psi.values);
  psi.values.array() *= potential_full_.array();
  workspace_.backward_p(psi.values);

  workspace_.forward_q(psi.values);
  psi.values.array() *= kinetic_half_.array();
  workspace_.backward_q(psi.values);

  max_boundary_tail_ = std::max(max_boundary_tail_, psi.boundary_tail_max());
}

void SplitStepper::run(ClassicalWavefunction& psi, int n_steps) {
  if (n_steps < 0) throw std::invalid_argument("SplitStepper: negative step count");
  for (int s = 0; s < n_steps; ++s) step(psi);
}

ClassicalWavefunction kvn_step(const SeparableClassicalHamiltonian& h, const ClassicalWavefunction& psi, double dt) {
  SplitStepper stepper(h, psi.grid, dt);
  ClassicalWavefunction out = psi;
  stepper.step(out);
  return out;
}

std::pair<double, double> characteristics_flow(const SeparableClassicalHamiltonian& h, double q0, double p0, double t,
                                               double max_step) {
  if (!(max_step > 0.0)) throw std::invalid_argument("characteristics_flow: step bound must be positive");
  if (t == 0.0) return {q0, p0};
  const Polynomial dt_dp = h.kinetic.derivative();
  const Polynomial dv_dq = h.potential.derivative();
  const int n = static_cast<int>(std::ceil(std::abs(t) / max_step));
  const double dt = t / n;
  double q = q0, p = p0;
  for (int s = 0; s < n; ++s) {
    const double k1q = dt_dp(p), k1p = -dv_dq(q);
    const double k2q = dt_dp(p + 0.5 * dt * k1p), k2p = -dv_dq(q + 0.5 * dt * k1q);
    const double k3q = dt_dp(p + 0.5 * dt * k2p), k3p = -dv_dq(q + 0.5 * dt * k2q);
    const double k4q = dt_dp(p + dt * k3p), k4p = -dv_dq(q + dt * k3q);
    q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  }
  return {q, p};
}

Eigen::MatrixXd transport_density_oracle(const SeparableClassicalHamiltonian& h,
                                         const std::function<double(double, double)>& rho0,
                                         const PhaseSpaceGrid& grid, double t, double max_step) {
  grid.validate();
  if (!rho0) throw std::invalid_argument("transport_density_oracle: missing initial density");
  Eigen::MatrixXd rho(grid.nq, grid.np);
  for (int j = 0; j < grid.np; ++j)
    for (int i = 0; i < grid.nq; ++i) {
      const auto [qb, pb] = characteristics_flow(h, grid.q(i), grid.p(j), -t, max_step);
      rho(i, j) = rho0(qb, pb);
    }
  return rho;
}

double expectation(const ClassicalWavefunction& psi, const BivariatePolynomial& f) {
  double acc = 0.0;
  for (int i = 0; i < psi.grid.nq; ++i)
    for (int j = 0; j < psi.grid.np; ++j) acc += f(psi.grid.q(i), psi.grid.p(j)) * std::norm(psi.values(i, j));
  return acc * psi.grid.cell();
}

double expectation(const ClassicalWavefunction& psi, const std::function<double(double, double)>& f) {
  if (!f) throw std::invalid_argument("expectation: missing observable");
  double acc = 0.0;
  for (int i = 0; i < psi.grid.nq; ++i)
    for (int j = 0; j < psi.grid.np; ++j) acc += f(psi.grid.q(i), psi.grid.p(j)) * std::norm(psi.values(i, j));
  return acc * psi.grid.cell();
}

double l2_density_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const PhaseSpaceGrid& grid) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("l2_density_distance: shape mismatch");
  return std::sqrt((a - b).squaredNorm() * grid.cell());
}

double phase_decoupling_error(const SeparableClassicalHamiltonian& h, const ClassicalWavefunction& psi0,
                              const std::function<double(double, double)>& theta, int n_steps, double dt) {
  ClassicalWavefunction plain = psi0;
  ClassicalWavefunction twisted = psi0;
  if (theta) {
    for (int j = 0; j < psi0.grid.np; ++j)
      for (int i = 0; i < psi0.grid.nq; ++i)
        twisted.values(i, j) *= std::polar(1.0, theta(psi0.grid.q(i), psi0.grid.p(j)));
  }
  SplitStepper stepper(h, psi0.grid, dt);
  stepper.run(plain, n_steps);
  stepper.run(twisted, n_steps);
  return l2_density_distance(plain.density(), twisted.density(), psi0.grid);
}

}  // namespace kvnlab
