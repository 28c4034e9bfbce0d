#include "kvnlab/gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace kvnlab {

QuadraticHamiltonian QuadraticHamiltonian::make(const Eigen::Matrix4d& m, const Eigen::Vector4d& c, double h0,
                                                const CanonicalLayout& layout) {
  layout.validate();
  QuadraticHamiltonian h;
  h.quadratic = 0.5 * (m + m.transpose());
  h.linear = c;
  h.offset = h0;
  h.layout = layout;
  return h;
}

double GaussianState::uncertainty_floor() const {
  const std::complex<double> im(0.0, 1.0);
  Eigen::Matrix4cd herm = cov.cast<std::complex<double>>() + im * (layout.hbar / 2.0) * layout.omega.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void GaussianState::validate(double tol) const {
  layout.validate();
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("GaussianState: covariance must be symmetric");
  if (uncertainty_floor() < -tol)
    throw std::invalid_argument("GaussianState: covariance violates the uncertainty bound");
}

GaussianState vacuum_state(const CanonicalLayout& layout) {
  GaussianState s;
  s.layout = layout;
  s.mean.setZero();
  s.cov = (layout.hbar / 2.0) * Eigen::Matrix4d::Identity();
  s.validate();
  return s;
}

void CanonicalTransform::validate(double tol) const {
  from.validate();
  to.validate();
  if (symplectic_residual() > tol)
    throw std::invalid_argument("CanonicalTransform: S omega S^T does not match the target form");
}

QuadraticHamiltonian oscillator_pair_hamiltonian(double m, double omega, double hbar) {
  if (!(m > 0.0)) throw std::invalid_argument("oscillator_pair_hamiltonian: mass must be positive");
  if (!(omega > 0.0)) throw std::invalid_argument("oscillator_pair_hamiltonian: frequency must be positive");
  Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
  q.diagonal() << m * omega * omega, 1.0 / m, -m * omega * omega, -1.0 / m;
  return QuadraticHamiltonian::make(q, Eigen::Vector4d::Zero(), 0.0, CanonicalLayout::oscillator_pair(hbar));
}

CanonicalTransform qmfs_transform(double hbar) {
  CanonicalTransform t;
  t.from = CanonicalLayout::oscillator_pair(hbar);
  t.to = CanonicalLayout::qmfs(hbar);
  t.matrix << 1.0, 0.0, 1.0, 0.0,    // q = q1 + q2
      0.0, 0.5, 0.0, 0.5,            // P = (p1 + p2)/2
      0.5, 0.0, -0.5, 0.0,           // Q = (q1 - q2)/2
      0.0, 1.0, 0.0, -1.0;           // p = p1 - p2
  t.validate();
  return t;
}

QuadraticHamiltonian transform_hamiltonian(const CanonicalTransform& t, const QuadraticHamiltonian& h) {
  if (!h.layout.compatible_with(t.from))
    throw std::invalid_argument("transform_hamiltonian: Hamiltonian layout does not match the transform source");
  t.validate();
  if (std::abs(t.matrix.determinant()) < 1e-12)
    throw std::invalid_argument("transform_hamiltonian: singular transform");
  Eigen::Matrix4d s_inv = t.matrix.inverse();
  QuadraticHamiltonian out;
  out.quadratic = s_inv.transpose() * h.quadratic * s_inv;
  out.quadratic = 0.5 * (out.quadratic + out.quadratic.transpose());
  out.linear = s_inv.transpose() * h.linear;
  out.offset = h.offset;
  out.layout = t.to;
  return out;
}

IntegrabilityResult check_qmfs_integrability(const GeneratorTriple& gen, double tol) {
  const BivariatePolynomial df_dq = gen.f.d_dq();
  const BivariatePolynomial dg_dp = gen.g.d_dp();
  const BivariatePolynomial diff = df_dq + dg_dp * -1.0;
  const double scale = std::max({1.0, gen.f.max_abs_coeff(), gen.g.max_abs_coeff()});
  if (diff.max_abs_coeff() > tol * scale) return {false, std::nullopt};
  // H(q, p) = int_0^p f(q, p') dp' + int_0^q g(q', 0) dq'; closure makes dH/dq = g.
  BivariatePolynomial h = gen.f.antiderivative_p() + gen.g.at_p_zero().antiderivative_q();
  return {true, std::move(h)};
}

GeneratorTriple extract_generator_triple(const QuadraticHamiltonian& h) {
  if (!h.layout.compatible_with(CanonicalLayout::qmfs(h.layout.hbar)))
    throw std::invalid_argument("extract_generator_triple: Hamiltonian must be in QMFS variables");
  const Eigen::Matrix4d& m = h.quadratic;
  // Hidden-sector quadratic terms (P^2, Q^2, QP) fall outside the f P + g Q + h form.
  if (std::abs(m(1, 1)) > 0.0 || std::abs(m(2, 2)) > 0.0 || std::abs(m(1, 2)) > 0.0)
    throw std::invalid_argument("extract_generator_triple: Hamiltonian is not linear in the hidden pair");
  GeneratorTriple gen;
  gen.f = BivariatePolynomial::from_terms({{1, 0, m(1, 0)}, {0, 1, m(1, 3)}, {0, 0, h.linear(1)}});
  gen.g = BivariatePolynomial::from_terms({{1, 0, m(2, 0)}, {0, 1, m(2, 3)}, {0, 0, h.linear(2)}});
  gen.h = BivariatePolynomial::from_terms({{2, 0, 0.5 * m(0, 0)},
                                           {1, 1, m(0, 3)},
                                           {0, 2, 0.5 * m(3, 3)},
                                           {1, 0, h.linear(0)},
                                           {0, 1, h.linear(3)},
                                           {0, 0, h.offset}});
  return gen;
}

Eigen::Matrix4d mean_flow_generator(const QuadraticHamiltonian& h) { return h.layout.omega * h.quadratic; }

GaussianState evolve_gaussian(const QuadraticHamiltonian& h, const GaussianState& s, double t) {
  if (!h.layout.compatible_with(s.layout))
    throw std::invalid_argument("evolve_gaussian: state and Hamiltonian layouts differ");
  if ((h.quadratic - h.quadratic.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw std::invalid_argument("evolve_gaussian: quadratic block must be symmetric");
  // Affine flow packed into one exponential: [[A, omega c], [0, 0]].
  Eigen::Matrix<double, 5, 5> gen = Eigen::Matrix<double, 5, 5>::Zero();
  gen.topLeftCorner<4, 4>() = mean_flow_generator(h);
  gen.topRightCorner<4, 1>() = h.layout.omega * h.linear;
  Eigen::Matrix<double, 5, 5> flow = (gen * t).exp();
  const Eigen::Matrix4d s_t = flow.topLeftCorner<4, 4>();
  const Eigen::Vector4d drift = flow.topRightCorner<4, 1>();

  GaussianState out;
  out.layout = s.layout;
  out.mean = s_t * s.mean + drift;
  out.cov = s_t * s.cov * s_t.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  return out;
}

MeasurementOutcome measure_variable(const GaussianState& s, int index, double sigma_m) {
  if (index < 0 || index > 3) throw std::invalid_argument("measure_variable: variable index out of range");
  if (!(sigma_m > 0.0)) throw std::invalid_argument("measure_variable: sigma_m must be positive");

  const double var_u = s.cov(index, index);
  const double denom = var_u + sigma_m * sigma_m;

  MeasurementOutcome out;
  out.outcome_mean = s.mean(index);
  out.outcome_variance = denom;

  out.posterior = s;
  // Conditioning on the readout, taken at its predicted mean so the mean is unchanged.
  out.posterior.cov = s.cov - (s.cov.col(index) * s.cov.row(index)) / denom;
  // Conjugate-variable noise floor demanded by the commutation relations.
  const double hbar = s.layout.hbar;
  for (int v = 0; v < 4; ++v) {
    const double w = s.layout.omega(index, v);
    out.posterior.cov(v, v) += hbar * hbar * w * w / (4.0 * sigma_m * sigma_m);
  }
  out.posterior.cov = 0.5 * (out.posterior.cov + out.posterior.cov.transpose());
  out.posterior.validate();
  return out;
}

double back_action_deviation(const QuadraticHamiltonian& h, const GaussianState& s0, int probe_index,
                             int target_index, double t_meas, double sigma_m, double t_final) {
  if (t_meas < 0.0 || t_final < t_meas)
    throw std::invalid_argument("back_action_deviation: need 0 <= t_meas <= t_final");
  const GaussianState at_meas = evolve_gaussian(h, s0, t_meas);
  const GaussianState probed = measure_variable(at_meas, probe_index, sigma_m).posterior;
  const double rest = t_final - t_meas;
  const double with_probe = evolve_gaussian(h, probed, rest).cov(target_index, target_index);
  const double without = evolve_gaussian(h, at_meas, rest).cov(target_index, target_index);
  return std::abs(with_probe - without);
}

}  // namespace kvnlab
