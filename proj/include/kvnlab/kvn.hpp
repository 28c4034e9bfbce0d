#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>

#include "kvnlab/fields.hpp"
#include "kvnlab/phase_grid.hpp"
#include "kvnlab/polynomial.hpp"
#include "kvnlab/spectral.hpp"

namespace kvnlab {

// H_cl(q, p) = T(p) + V(q) with polynomial parts.
struct SeparableClassicalHamiltonian {
  Polynomial kinetic;    // T(p)
  Polynomial potential;  // V(q)

  double operator()(double q, double p) const { return kinetic(p) + potential(q); }

  static SeparableClassicalHamiltonian harmonic(double m = 1.0, double omega = 1.0) {
    SeparableClassicalHamiltonian h;
    h.kinetic = Polynomial::monomial(2, 0.5 / m);
    h.potential = Polynomial::monomial(2, 0.5 * m * omega * omega);
    return h;
  }

  static SeparableClassicalHamiltonian free_particle(double m = 1.0) {
    SeparableClassicalHamiltonian h;
    h.kinetic = Polynomial::monomial(2, 0.5 / m);
    return h;
  }
};

// L psi = i (dH/dq dpsi/dp - dH/dp dpsi/dq), the Liouville generator applied spectrally.
Eigen::MatrixXcd liouville_apply(const SeparableClassicalHamiltonian& h, const ClassicalWavefunction& psi);

// Strang-split propagator for i dpsi/dt = L psi: a half step of the kinetic
// advection (exact shift along q, diagonal after an FFT in q), a full step of
// the potential advection (shift along p), and a second kinetic half step.
// Each factor is a unit-modulus multiplier, so the step is exactly unitary.
class SplitStepper {
 public:
  SplitStepper(const SeparableClassicalHamiltonian& h, const PhaseSpaceGrid& grid, double dt);

  void step(ClassicalWavefunction& psi);
  void run(ClassicalWavefunction& psi, int n_steps);

  double dt() const { return dt_; }
  const FourierWorkspace& workspace() const { return workspace_; }
  // Worst boundary-seam magnitude seen after any step; > 1e-12 means the
  // domain is too small for the state being transported.
  double max_boundary_tail() const { return max_boundary_tail_; }

 private:
  PhaseSpaceGrid grid_;
  double dt_;
  FourierWorkspace workspace_;
  Eigen::MatrixXcd kinetic_half_;   // exp(-i kq T'(p) dt/2) / nq
  Eigen::MatrixXcd potential_full_; // exp(+i kp V'(q) dt) / np
  double max_boundary_tail_ = 0.0;
};

// One Strang step as a pure transformation (wrapper over SplitStepper).
ClassicalWavefunction kvn_step(const SeparableClassicalHamiltonian& h, const ClassicalWavefunction& psi, double dt);

inline constexpr double kDefaultFlowStep = 2.0 * M_PI * 1e-3;

// Hamiltonian point flow (q0, p0) -> (q(t), p(t)) by fixed-step RK4.
// t may be negative; the step bound caps the magnitude of each stage.
std::pair<double, double> characteristics_flow(const SeparableClassicalHamiltonian& h, double q0, double p0, double t,
                                               double max_step = kDefaultFlowStep);

// Exact Liouville transport of a density: rho(x, t) = rho0(flow_{-t}(x)) per node.
Eigen::MatrixXd transport_density_oracle(const SeparableClassicalHamiltonian& h,
                                         const std::function<double(double, double)>& rho0,
                                         const PhaseSpaceGrid& grid, double t, double max_step = kDefaultFlowStep);

// sum f(q, p) |psi|^2 dq dp in fixed row-major node order.
double expectation(const ClassicalWavefunction& psi, const BivariatePolynomial& f);
double expectation(const ClassicalWavefunction& psi, const std::function<double(double, double)>& f);

double l2_density_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const PhaseSpaceGrid& grid);

// Evolves psi0 and exp(i theta) psi0 for the same n steps and returns the L2
// distance of the resulting densities; the Liouville density must not feel a phase.
double phase_decoupling_error(const SeparableClassicalHamiltonian& h, const ClassicalWavefunction& psi0,
                              const std::function<double(double, double)>& theta, int n_steps, double dt);

}  // namespace kvnlab
