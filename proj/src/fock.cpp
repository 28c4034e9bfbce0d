#include "kvnlab/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace kvnlab {

namespace {

// ladder-operator quadratures on one truncated mode
Eigen::MatrixXcd position_matrix(int n, double m, double omega, double hbar) {
  const double c = std::sqrt(hbar / (2.0 * m * omega));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    out(k, k + 1) = c * std::sqrt(k + 1.0);
    out(k + 1, k) = c * std::sqrt(k + 1.0);
  }
  return out;
}

Eigen::MatrixXcd momentum_matrix(int n, double m, double omega, double hbar) {
  const double d = std::sqrt(hbar * m * omega / 2.0);
  const std::complex<double> i{0.0, 1.0};
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    out(k + 1, k) = i * d * std::sqrt(k + 1.0);
    out(k, k + 1) = -i * d * std::sqrt(k + 1.0);
  }
  return out;
}

// <psi| A (x) B |psi> with A on mode 1 and B on mode 2
std::complex<double> expect_product(const Eigen::MatrixXcd& c, const Eigen::MatrixXcd& a,
                                    const Eigen::MatrixXcd& b) {
  return (c.conjugate().cwiseProduct(a * c * b.transpose())).sum();
}

}  // namespace

double FockPairState::norm() const { return amplitudes.norm(); }

bool FockPairState::truncation_adequate(double tol) const {
  const int n = n_trunc;
  if (n < 2) return false;
  double top = 0.0;
  for (int k = n - 2; k < n; ++k) {
    top = std::max(top, amplitudes.row(k).squaredNorm());
    top = std::max(top, amplitudes.col(k).squaredNorm());
  }
  return top < tol;
}

void FockPairState::validate() const {
  if (n_trunc < 1) throw std::invalid_argument("n_trunc must be positive");
  if (amplitudes.rows() != n_trunc || amplitudes.cols() != n_trunc)
    throw std::invalid_argument("amplitude matrix does not match n_trunc");
  if (m <= 0.0 || omega <= 0.0 || hbar <= 0.0) throw std::invalid_argument("m, omega, hbar must be positive");
  if (std::abs(norm() - 1.0) > 1e-12) throw std::invalid_argument("state is not normalized");
}

double fock_energy(int n1, int n2, double /*m*/, double omega, double lambda, double hbar) {
  if (n1 < 0 || n2 < 0) throw std::invalid_argument("quantum numbers must be nonnegative");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive or infinite");
  const double e1 = hbar * omega * (n1 + 0.5);
  const double e2 = hbar * omega * (n2 + 0.5);
  const double stabilizer = std::isinf(lambda) ? 0.0 : e2 * e2 / (2.0 * lambda);
  return e1 - e2 + stabilizer;
}

FockPairState coherent_pair_state(std::complex<double> alpha1, std::complex<double> alpha2, int n_trunc,
                                  double m, double omega, double hbar) {
  if (n_trunc < 2) throw std::invalid_argument("n_trunc must be at least 2");
  const double need = 4.0 * std::max(std::norm(alpha1), std::norm(alpha2));
  if (need >= static_cast<double>(n_trunc))
    throw std::invalid_argument("truncation inadequate: need n_trunc > " + std::to_string(need) +
                                " for the requested amplitudes");

  auto mode_vector = [&](std::complex<double> alpha) {
    Eigen::VectorXcd v(n_trunc);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int k = 1; k < n_trunc; ++k) v(k) = v(k - 1) * alpha / std::sqrt(static_cast<double>(k));
    return v;
  };

  FockPairState s;
  s.n_trunc = n_trunc;
  s.m = m;
  s.omega = omega;
  s.hbar = hbar;
  s.amplitudes = mode_vector(alpha1) * mode_vector(alpha2).transpose();
  s.amplitudes /= s.amplitudes.norm();
  return s;
}

PairMoments pair_moments(const FockPairState& s) {
  const int n = s.n_trunc;
  const Eigen::MatrixXcd qm = position_matrix(n, s.m, s.omega, s.hbar);
  const Eigen::MatrixXcd pm = momentum_matrix(n, s.m, s.omega, s.hbar);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd q2 = qm * qm;
  const Eigen::MatrixXcd p2 = pm * pm;
  const Eigen::MatrixXcd& c = s.amplitudes;

  const double q1 = expect_product(c, qm, id).real();
  const double q2m = expect_product(c, id, qm).real();
  const double p1 = expect_product(c, pm, id).real();
  const double p2m = expect_product(c, id, pm).real();

  PairMoments out;
  out.q_mean = q1 + q2m;
  out.p_mean = p1 - p2m;
  out.Q_mean = 0.5 * (q1 - q2m);
  out.P_mean = 0.5 * (p1 + p2m);

  const double q_sq = expect_product(c, q2, id).real() + 2.0 * expect_product(c, qm, qm).real() +
                      expect_product(c, id, q2).real();
  const double p_sq = expect_product(c, p2, id).real() - 2.0 * expect_product(c, pm, pm).real() +
                      expect_product(c, id, p2).real();
  out.q_var = q_sq - out.q_mean * out.q_mean;
  out.p_var = p_sq - out.p_mean * out.p_mean;
  return out;
}

FockPairState evolve_fock(const FockPairState& s, double lambda, double t) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive or infinite");
  const int n = s.n_trunc;
  Eigen::VectorXcd ph1(n), ph2(n);
  for (int k = 0; k < n; ++k) {
    const double e1 = s.hbar * s.omega * (k + 0.5);
    const double e2neg = s.hbar * s.omega * (k + 0.5);
    const double e2 = -e2neg + (std::isinf(lambda) ? 0.0 : e2neg * e2neg / (2.0 * lambda));
    ph1(k) = std::polar(1.0, -e1 * t / s.hbar);
    ph2(k) = std::polar(1.0, -e2 * t / s.hbar);
  }
  FockPairState out = s;
  out.amplitudes = ph1.asDiagonal() * s.amplitudes * ph2.asDiagonal();
  return out;
}

std::vector<FockSample> evolve_fock_trajectory(const FockPairState& s0, double lambda,
                                               const std::vector<double>& t_samples) {
  std::vector<FockSample> out;
  out.reserve(t_samples.size());
  for (double t : t_samples) {
    FockSample sample;
    sample.time = t;
    sample.moments = pair_moments(evolve_fock(s0, lambda, t));
    out.push_back(sample);
  }
  return out;
}

std::map<double, double> stabilizer_deviation(std::complex<double> alpha1, std::complex<double> alpha2,
                                              const std::vector<double>& lambda_list, double t_final,
                                              int n_trunc, int n_samples) {
  if (alpha2 == std::complex<double>(0.0, 0.0))
    throw std::invalid_argument("alpha2 must be nonzero: a mode-2 eigenstate makes the stabilizer a global phase");
  if (t_final <= 0.0 || n_samples < 2) throw std::invalid_argument("need t_final > 0 and at least 2 samples");

  FockPairState s0 = coherent_pair_state(alpha1, alpha2, n_trunc);
  if (!s0.truncation_adequate()) throw std::invalid_argument("truncation inadequate for requested amplitudes");
  const PairMoments m0 = pair_moments(s0);

  std::vector<double> times(n_samples);
  for (int k = 0; k < n_samples; ++k) times[k] = t_final * k / (n_samples - 1.0);

  std::map<double, double> out;
  for (double lambda : lambda_list) {
    double worst = 0.0;
    for (double t : times) {
      const PairMoments mt = pair_moments(evolve_fock(s0, lambda, t));
      const double q_cl = m0.q_mean * std::cos(s0.omega * t) +
                          m0.p_mean / (s0.m * s0.omega) * std::sin(s0.omega * t);
      worst = std::max(worst, std::abs(mt.q_mean - q_cl));
    }
    out[lambda] = worst;
  }
  return out;
}

}  // namespace kvnlab
