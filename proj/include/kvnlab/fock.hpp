#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <vector>

namespace kvnlab {

// Exact state of the oscillator pair over the truncated two-mode number basis.
// amplitudes(n1, n2) is the coefficient of |n1, n2>.
struct FockPairState {
  int n_trunc = 32;
  Eigen::MatrixXcd amplitudes;
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;

  double norm() const;
  // population in the top two levels of either mode stays below tol
  bool truncation_adequate(double tol = 1e-8) const;
  void validate() const;
};

// E = hbar w (n1 + 1/2) - hbar w (n2 + 1/2) + (1/(2 lambda)) (hbar w (n2 + 1/2))^2.
// lambda = infinity switches the stabilizer off exactly.
double fock_energy(int n1, int n2, double m, double omega, double lambda, double hbar);

// Truncated product of coherent states, renormalized.  Requires 4|alpha|^2 < n_trunc
// for both modes so the discarded tail is negligible.
FockPairState coherent_pair_state(std::complex<double> alpha1, std::complex<double> alpha2, int n_trunc,
                                  double m = 1.0, double omega = 1.0, double hbar = 1.0);

struct PairMoments {
  double q_mean = 0.0;
  double p_mean = 0.0;
  double q_var = 0.0;
  double p_var = 0.0;
  double Q_mean = 0.0;
  double P_mean = 0.0;
};

// Moments of q = q1 + q2, p = p1 - p2, Q = (q1 - q2)/2, P = (p1 + p2)/2
// via ladder-operator matrix elements.
PairMoments pair_moments(const FockPairState& s);

// Diagonal evolution: each amplitude picks up exp(-i E(n1,n2) t / hbar).
FockPairState evolve_fock(const FockPairState& s, double lambda, double t);

struct FockSample {
  double time = 0.0;
  PairMoments moments;
};

std::vector<FockSample> evolve_fock_trajectory(const FockPairState& s0, double lambda,
                                               const std::vector<double>& t_samples);

// D(lambda) = max_t |<q>_lambda(t) - q_cl(t)| against the classical harmonic flow
// started from the matching initial moments.  Sampled on a uniform grid in [0, t_final].
std::map<double, double> stabilizer_deviation(std::complex<double> alpha1, std::complex<double> alpha2,
                                              const std::vector<double>& lambda_list, double t_final,
                                              int n_trunc = 32, int n_samples = 400);

}  // namespace kvnlab
