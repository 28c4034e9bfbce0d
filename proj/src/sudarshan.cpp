#include "kvnlab/sudarshan.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "kvnlab/spectral.hpp"

namespace kvnlab {

namespace {

bool monomial_has_classical(const HiddenMonomial& t) { return t.q_pow > 0 || t.p_pow > 0; }
bool monomial_has_hidden(const HiddenMonomial& t) { return t.Q_pow > 0 || t.P_pow > 0; }

}  // namespace

HiddenOperator::HiddenOperator(std::vector<HiddenMonomial> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.q_pow < 0 || t.p_pow < 0 || t.Q_pow < 0 || t.P_pow < 0)
      throw std::invalid_argument("monomial powers must be nonnegative");
  }
}

HiddenOperator HiddenOperator::symbol(char name) {
  HiddenMonomial t;
  t.coeff = 1.0;
  switch (name) {
    case 'q': t.q_pow = 1; break;
    case 'p': t.p_pow = 1; break;
    case 'Q': t.Q_pow = 1; break;
    case 'P': t.P_pow = 1; break;
    default: throw std::invalid_argument("symbol must be one of q, p, Q, P");
  }
  return HiddenOperator({t});
}

bool HiddenOperator::classical_only() const {
  for (const auto& t : terms_)
    if (monomial_has_hidden(t)) return false;
  return true;
}

bool HiddenOperator::hidden_only() const {
  for (const auto& t : terms_)
    if (monomial_has_classical(t)) return false;
  return true;
}

bool HiddenOperator::has_mixed_monomial() const {
  for (const auto& t : terms_)
    if (monomial_has_classical(t) && monomial_has_hidden(t)) return true;
  return false;
}

double HiddenOperator::eval_classical(double q, double p) const {
  if (!classical_only()) throw std::invalid_argument("operator involves the hidden pair");
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.coeff * std::pow(q, t.q_pow) * std::pow(p, t.p_pow);
  return acc;
}

// ---- spectral application ----

Eigen::MatrixXcd apply_hidden_operator(const HiddenOperator& op, const ClassicalWavefunction& psi,
                                       double hbar) {
  const PhaseSpaceGrid& g = psi.grid;
  const int nq = g.nq, np = g.np;
  FourierWorkspace ws(g);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nq, np);
  const double scale = 1.0 / (static_cast<double>(nq) * np);

  Eigen::MatrixXcd work(nq, np);
  for (const auto& t : op.terms()) {
    // multiplicative part first
    for (int j = 0; j < np; ++j) {
      const double pj = g.p(j);
      for (int i = 0; i < nq; ++i) {
        double f = t.coeff;
        if (t.q_pow > 0) f *= std::pow(g.q(i), t.q_pow);
        if (t.p_pow > 0) f *= std::pow(pj, t.p_pow);
        work(i, j) = f * psi.values(i, j);
      }
    }
    // derivative part: Q -> -hbar k_p, P -> hbar k_q in frequency space
    if (t.Q_pow > 0 || t.P_pow > 0) {
      ws.forward_2d(work);
      for (int j = 0; j < np; ++j) {
        const double kp = g.freq_p(j);
        for (int i = 0; i < nq; ++i) {
          const double kq = g.freq_q(i);
          bool nyq = (t.P_pow > 0 && i == nq / 2) || (t.Q_pow > 0 && j == np / 2);
          if (nyq) {
            work(i, j) = 0.0;
            continue;
          }
          double mult = scale;
          for (int k = 0; k < t.Q_pow; ++k) mult *= -hbar * kp;
          for (int k = 0; k < t.P_pow; ++k) mult *= hbar * kq;
          work(i, j) *= mult;
        }
      }
      ws.backward_2d(work);
    }
    out += work;
  }
  return out;
}

// ---- doubled generator ----

DoubledHamiltonian sudarshan_hamiltonian(const SeparableClassicalHamiltonian& h, double hbar) {
  DoubledHamiltonian out;
  out.classical = h;
  out.hbar = hbar;
  return out;
}

Eigen::MatrixXcd apply_doubled_hamiltonian(const DoubledHamiltonian& h, const ClassicalWavefunction& psi) {
  const PhaseSpaceGrid& g = psi.grid;
  const Polynomial dV = h.classical.potential.derivative();
  const Polynomial dT = h.classical.kinetic.derivative();

  // (dV/dq) Q psi + (dT/dp) P psi, each Q/P application spectral
  ClassicalWavefunction tmp = psi;
  Eigen::MatrixXcd qpsi = apply_hidden_operator(HiddenOperator::symbol('Q'), tmp, h.hbar);
  Eigen::MatrixXcd ppsi = apply_hidden_operator(HiddenOperator::symbol('P'), tmp, h.hbar);

  Eigen::MatrixXcd out(g.nq, g.np);
  for (int j = 0; j < g.np; ++j) {
    const double dt_p = dT(g.p(j));
    for (int i = 0; i < g.nq; ++i) out(i, j) = dV(g.q(i)) * qpsi(i, j) + dt_p * ppsi(i, j);
  }

  if (h.perturbation && h.epsilon != 0.0) {
    tmp.values = psi.values;
    out += h.epsilon * apply_hidden_operator(*h.perturbation, tmp, h.hbar);
  }
  return out;
}

// ---- propagation ----

ClassicalWavefunction evolve_doubled(const DoubledHamiltonian& h, const ClassicalWavefunction& psi, double t,
                                     double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  const long long n_steps = std::llround(t / dt);
  if (std::abs(t - static_cast<double>(n_steps) * dt) > 1e-9 * std::max(1.0, std::abs(t)))
    throw std::invalid_argument("t must be a whole number of steps of dt");
  SplitStepper stepper(h.classical, psi.grid, dt);

  ClassicalWavefunction state = psi;
  if (h.epsilon == 0.0 || !h.perturbation) {
    stepper.run(state, static_cast<int>(n_steps));
    return state;
  }

  const HiddenOperator& pert = *h.perturbation;
  if (pert.has_mixed_monomial())
    throw std::invalid_argument("perturbation mixes classical and hidden factors; splitting unsupported");
  const bool hidden = pert.hidden_only();
  if (!hidden && !pert.classical_only())
    throw std::invalid_argument("perturbation mixes classical and hidden terms; splitting unsupported");

  const PhaseSpaceGrid& g = psi.grid;
  const int nq = g.nq, np = g.np;
  const double half = 0.5 * dt * h.epsilon / h.hbar;

  // exp(-i eps C dt / 2 hbar) as a diagonal phase, nodewise or in frequency space
  Eigen::MatrixXcd phase(nq, np);
  if (hidden) {
    const double scale = 1.0 / (static_cast<double>(nq) * np);
    for (int j = 0; j < np; ++j) {
      const double kp = g.freq_p(j);
      for (int i = 0; i < nq; ++i) {
        const double kq = g.freq_q(i);
        double val = 0.0;
        for (const auto& t : pert.terms()) {
          if ((t.Q_pow > 0 && j == np / 2) || (t.P_pow > 0 && i == nq / 2)) continue;
          double m = t.coeff;
          for (int k = 0; k < t.Q_pow; ++k) m *= -h.hbar * kp;
          for (int k = 0; k < t.P_pow; ++k) m *= h.hbar * kq;
          val += m;
        }
        phase(i, j) = std::polar(scale, -val * half);
      }
    }
  } else {
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < nq; ++i)
        phase(i, j) = std::polar(1.0, -pert.eval_classical(g.q(i), g.p(j)) * half);
  }

  FourierWorkspace ws(g);
  auto apply_phase = [&](Eigen::MatrixXcd& v) {
    if (hidden) {
      ws.forward_2d(v);
      v = v.cwiseProduct(phase);
      ws.backward_2d(v);
    } else {
      v = v.cwiseProduct(phase);
    }
  };

  for (long long s = 0; s < n_steps; ++s) {
    apply_phase(state.values);
    stepper.step(state);
    apply_phase(state.values);
  }
  return state;
}

// ---- superselection ----

double superselection_residual(const ClassicalWavefunction& psi, const HiddenOperator& f,
                               const std::function<double(double, double)>& theta) {
  if (!f.classical_only()) throw std::invalid_argument("not a classical observable");

  const PhaseSpaceGrid& g = psi.grid;
  ClassicalWavefunction twisted = psi;
  for (int j = 0; j < g.np; ++j)
    for (int i = 0; i < g.nq; ++i)
      twisted.values(i, j) *= std::polar(1.0, theta(g.q(i), g.p(j)));

  auto fn = [&](double q, double p) { return f.eval_classical(q, p); };
  return std::abs(expectation(psi, fn) - expectation(twisted, fn));
}

double hidden_expectation(const ClassicalWavefunction& psi, const HiddenOperator& op, double hbar) {
  Eigen::MatrixXcd applied = apply_hidden_operator(op, psi, hbar);
  std::complex<double> acc = (psi.values.conjugate().cwiseProduct(applied)).sum();
  return acc.real() * psi.grid.cell();
}

}  // namespace kvnlab
