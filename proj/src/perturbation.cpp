#include "kvnlab/perturbation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kvnlab {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void PerturbationSpec::validate() const {
  switch (kind) {
    case PerturbationKind::none:
      return;
    case PerturbationKind::quartic_stabilizer:
      if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive or infinite");
      return;
    case PerturbationKind::hidden_coupling: {
      if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
      const HiddenOperator& shape = hidden_shape ? *hidden_shape : default_hidden_shape();
      if (shape.has_mixed_monomial() || (!shape.hidden_only() && !shape.classical_only()))
        throw std::invalid_argument("hidden_shape must be a polynomial in (Q,P) alone or (q,p) alone");
      return;
    }
  }
  throw std::invalid_argument("unknown perturbation kind");
}

HiddenOperator default_hidden_shape() {
  HiddenMonomial qq;
  qq.coeff = 0.5;
  qq.Q_pow = 2;
  HiddenMonomial pp;
  pp.coeff = 0.5;
  pp.P_pow = 2;
  return HiddenOperator::from_terms({qq, pp});
}

double deformation_violation(const SeparableClassicalHamiltonian& h, const ClassicalWavefunction& psi0,
                             const std::function<double(double, double)>& rho0, const PerturbationSpec& spec,
                             double t, double dt) {
  if (spec.kind != PerturbationKind::hidden_coupling && spec.kind != PerturbationKind::none)
    throw std::invalid_argument("deformation_violation expects a hidden_coupling spec");
  spec.validate();

  DoubledHamiltonian hd = sudarshan_hamiltonian(h);
  hd.epsilon = (spec.kind == PerturbationKind::hidden_coupling) ? spec.epsilon : 0.0;
  hd.perturbation = spec.hidden_shape ? *spec.hidden_shape : default_hidden_shape();

  ClassicalWavefunction evolved = evolve_doubled(hd, psi0, t, dt);
  Eigen::MatrixXd reference = transport_density_oracle(h, rho0, psi0.grid, t);
  return l2_density_distance(evolved.density(), reference, psi0.grid);
}

std::vector<ScanPoint> deformation_scan(const SeparableClassicalHamiltonian& h, const ClassicalWavefunction& psi0,
                                        const std::function<double(double, double)>& rho0,
                                        const PerturbationSpec& base, const std::vector<double>& epsilons,
                                        double t, double dt) {
  char descriptor[128];
  std::snprintf(descriptor, sizeof(descriptor), "grid %dx%d; dt=%.6g", psi0.grid.nq, psi0.grid.np, dt);

  std::vector<ScanPoint> out;
  out.reserve(epsilons.size());
  for (double eps : epsilons) {
    PerturbationSpec spec = base;
    spec.kind = PerturbationKind::hidden_coupling;
    spec.epsilon = eps;
    const auto t0 = std::chrono::steady_clock::now();
    ScanPoint point;
    point.parameter = eps;
    point.metric = deformation_violation(h, psi0, rho0, spec, t, dt);
    point.t_final = t;
    point.descriptor = descriptor;
    point.runtime_seconds = seconds_since(t0);
    out.push_back(std::move(point));
  }
  return out;
}

std::vector<ScanPoint> stabilizer_scan(std::complex<double> alpha1, std::complex<double> alpha2,
                                       const std::vector<double>& lambda_list, double t_final, int n_trunc) {
  char descriptor[128];
  std::snprintf(descriptor, sizeof(descriptor), "n_trunc=%d; alpha1=%.6g%+.6gi; alpha2=%.6g%+.6gi", n_trunc,
                alpha1.real(), alpha1.imag(), alpha2.real(), alpha2.imag());

  std::vector<ScanPoint> out;
  out.reserve(lambda_list.size());
  for (double lambda : lambda_list) {
    const auto t0 = std::chrono::steady_clock::now();
    auto deviation = stabilizer_deviation(alpha1, alpha2, {lambda}, t_final, n_trunc);
    ScanPoint point;
    point.parameter = lambda;
    point.metric = deviation.at(lambda);
    point.t_final = t_final;
    point.descriptor = descriptor;
    point.runtime_seconds = seconds_since(t0);
    out.push_back(std::move(point));
  }
  return out;
}

void write_scan_csv(const std::string& path, const std::vector<ScanPoint>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "parameter,metric,t_final,descriptor,runtime_seconds\n";
  char buf[128];
  for (const auto& point : points) {
    std::snprintf(buf, sizeof(buf), "%.16e,%.16e,%.16e,", point.parameter, point.metric, point.t_final);
    out << buf << point.descriptor;
    std::snprintf(buf, sizeof(buf), ",%.6e\n", point.runtime_seconds);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace kvnlab
