#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "kvnlab/kvn.hpp"
#include "kvnlab/phase_grid.hpp"

namespace kvnlab {

// One normal-ordered term c * q^a p^b Q^c P^d.  The multiplicative factors
// q, p act on the field first (nodewise); the derivative factors
// Q = i hbar d/dp and P = -i hbar d/dq act on the product.
struct HiddenMonomial {
  double coeff = 0.0;
  int q_pow = 0;
  int p_pow = 0;
  int Q_pow = 0;
  int P_pow = 0;
};

class HiddenOperator {
 public:
  HiddenOperator() = default;
  explicit HiddenOperator(std::vector<HiddenMonomial> terms);

  static HiddenOperator symbol(char name);  // one of 'q', 'p', 'Q', 'P'
  static HiddenOperator from_terms(std::vector<HiddenMonomial> terms) { return HiddenOperator(std::move(terms)); }

  const std::vector<HiddenMonomial>& terms() const { return terms_; }

  bool classical_only() const;      // no Q or P factor anywhere
  bool hidden_only() const;         // no q or p factor anywhere
  bool has_mixed_monomial() const;  // some term carries both kinds

  // Evaluate the classical part as a function on phase space (classical_only operators).
  double eval_classical(double q, double p) const;

 private:
  std::vector<HiddenMonomial> terms_;
};

// Applies the operator spectrally on the grid field.
Eigen::MatrixXcd apply_hidden_operator(const HiddenOperator& op, const ClassicalWavefunction& psi,
                                       double hbar = 1.0);

// The doubled-space generator: H = (dH_cl/dq) Q + (dH_cl/dp) P, optionally
// deformed by epsilon times a perturbation operator.
struct DoubledHamiltonian {
  SeparableClassicalHamiltonian classical;
  double hbar = 1.0;
  double epsilon = 0.0;
  std::optional<HiddenOperator> perturbation;
};

DoubledHamiltonian sudarshan_hamiltonian(const SeparableClassicalHamiltonian& h, double hbar = 1.0);

// H psi built from hidden-operator applications; equals hbar * liouville_apply
// for the undeformed generator.
Eigen::MatrixXcd apply_doubled_hamiltonian(const DoubledHamiltonian& h, const ClassicalWavefunction& psi);

// Unitary propagation to time t in steps of dt (t must be a whole number of
// steps).  With epsilon = 0 this is the identical KvN splitting; otherwise the
// perturbation enters as symmetric half-factors around each advection step.
// The perturbation must be a polynomial in (Q, P) alone (frequency-diagonal)
// or (q, p) alone (node-diagonal).
ClassicalWavefunction evolve_doubled(const DoubledHamiltonian& h, const ClassicalWavefunction& psi, double t,
                                     double dt);

// |<f>_psi - <f>_{exp(i theta) psi}| for a classical observable f.
// Throws if f involves the hidden pair: such an operator is not a classical observable.
double superselection_residual(const ClassicalWavefunction& psi, const HiddenOperator& f,
                               const std::function<double(double, double)>& theta);

// Re <psi | op psi> over the grid inner product.
double hidden_expectation(const ClassicalWavefunction& psi, const HiddenOperator& op, double hbar = 1.0);

}  // namespace kvnlab
