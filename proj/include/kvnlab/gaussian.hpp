#pragma once

#include <Eigen/Dense>
#include <optional>

#include "kvnlab/layout.hpp"
#include "kvnlab/polynomial.hpp"

namespace kvnlab {

// H = 1/2 r^T quadratic r + linear . r + offset over the variables of `layout`.
// The quadratic block is symmetrized at construction; use make() for raw input.
struct QuadraticHamiltonian {
  Eigen::Matrix4d quadratic = Eigen::Matrix4d::Zero();
  Eigen::Vector4d linear = Eigen::Vector4d::Zero();
  double offset = 0.0;
  CanonicalLayout layout = CanonicalLayout::oscillator_pair();

  static QuadraticHamiltonian make(const Eigen::Matrix4d& m, const Eigen::Vector4d& c, double h0,
                                   const CanonicalLayout& layout);
};

// First and second moments of a 4-mode Gaussian state.  Valid states satisfy
// cov + (i hbar / 2) omega >= 0; validate() checks it via Hermitian eigenvalues.
struct GaussianState {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();
  CanonicalLayout layout = CanonicalLayout::oscillator_pair();

  // Smallest eigenvalue of cov + (i hbar / 2) omega.
  double uncertainty_floor() const;
  void validate(double tol = 1e-10) const;
};

// Zero-mean minimum-uncertainty state with cov = (hbar/2) I.
GaussianState vacuum_state(const CanonicalLayout& layout);

// Linear canonical change of variables r' = S r mapping `from` to `to`.
struct CanonicalTransform {
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Identity();
  CanonicalLayout from = CanonicalLayout::oscillator_pair();
  CanonicalLayout to = CanonicalLayout::oscillator_pair();

  Eigen::Vector4d apply(const Eigen::Vector4d& r) const { return matrix * r; }

  // max |S omega_from S^T - omega_to|
  double symplectic_residual() const {
    return (matrix * from.omega * matrix.transpose() - to.omega).cwiseAbs().maxCoeff();
  }

  void validate(double tol = 1e-12) const;
};

// Coefficient functions of a hidden-sector-linear Hamiltonian H = f(q,p) P + g(q,p) Q + h(q,p).
struct GeneratorTriple {
  BivariatePolynomial f;
  BivariatePolynomial g;
  BivariatePolynomial h;
};

struct IntegrabilityResult {
  bool closes = false;
  // Present iff closes: the H_cl with dH/dp = f, dH/dq = g, H(0,0) = 0.
  std::optional<BivariatePolynomial> classical_hamiltonian;
};

// ---- operations ----

// Opposite-sign oscillator pair: H = p1^2/2m + m w^2 q1^2/2 - p2^2/2m - m w^2 q2^2/2.
QuadraticHamiltonian oscillator_pair_hamiltonian(double m, double omega, double hbar = 1.0);

// (q1,p1,q2,p2) -> (q, P, Q, p) with q = q1+q2, Q = (q1-q2)/2, p = p1-p2, P = (p1+p2)/2.
CanonicalTransform qmfs_transform(double hbar = 1.0);

// Rewrites H in the image variables: M' = S^-T M S^-1, c' = S^-T c.
QuadraticHamiltonian transform_hamiltonian(const CanonicalTransform& t, const QuadraticHamiltonian& h);

// A generator triple closes into classical dynamics iff df/dq = dg/dp.
IntegrabilityResult check_qmfs_integrability(const GeneratorTriple& gen, double tol = 1e-12);

// Reads (f, g, h) off a quadratic Hamiltonian expressed in QMFS variables.
// Requires H linear in the hidden pair (no P^2, Q^2 or QP terms).
GeneratorTriple extract_generator_triple(const QuadraticHamiltonian& h);

// Generator of the mean flow: d<r>/dt = A <r> + omega c with A = omega M.
Eigen::Matrix4d mean_flow_generator(const QuadraticHamiltonian& h);

// Exact Gaussian evolution: mean -> S_t mean + drift, cov -> S_t cov S_t^T
// with S_t = exp(omega M t) computed by scaling-and-squaring.
GaussianState evolve_gaussian(const QuadraticHamiltonian& h, const GaussianState& s, double t);

struct MeasurementOutcome {
  GaussianState posterior;
  double outcome_mean = 0.0;
  double outcome_variance = 0.0;
};

// Noisy linear readout of variable `index` with noise sigma_m: Gaussian conditioning
// on the readout followed by the commutator-limited back-action noise
// Var(v) += hbar^2 |omega(u, v)|^2 / (4 sigma_m^2) on every variable v.
// The posterior mean is the prior mean (conditioning at the predicted outcome).
MeasurementOutcome measure_variable(const GaussianState& s, int index, double sigma_m);

// |Var(target at t_final) with a probe measurement at t_meas - the same without it|.
double back_action_deviation(const QuadraticHamiltonian& h, const GaussianState& s0, int probe_index,
                             int target_index, double t_meas, double sigma_m, double t_final);

}  // namespace kvnlab
