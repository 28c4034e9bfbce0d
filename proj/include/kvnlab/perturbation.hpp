#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "kvnlab/fock.hpp"
#include "kvnlab/sudarshan.hpp"

namespace kvnlab {

enum class PerturbationKind { none, quartic_stabilizer, hidden_coupling };

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::none;
  double lambda = std::numeric_limits<double>::infinity();  // quartic stabilizer scale
  double epsilon = 0.0;                                     // hidden coupling strength
  std::optional<HiddenOperator> hidden_shape;

  void validate() const;
};

// (Q^2 + P^2)/2, the minimal frequency-diagonal deformation.
HiddenOperator default_hidden_shape();

// L2 distance between the evolved density under the deformed generator and
// exact Liouville transport of the initial density.  rho0 must be the closed
// form of |psi0|^2: the transport oracle evaluates it at flowed-back points
// that fall between grid nodes.  epsilon = 0 reduces to the splitting error
// of the unperturbed propagator.
double deformation_violation(const SeparableClassicalHamiltonian& h, const ClassicalWavefunction& psi0,
                             const std::function<double(double, double)>& rho0, const PerturbationSpec& spec,
                             double t, double dt);

// One row of a parameter scan, shared by the Lambda and epsilon studies.
struct ScanPoint {
  double parameter = 0.0;
  double metric = 0.0;
  double t_final = 0.0;
  std::string descriptor;
  double runtime_seconds = 0.0;
};

std::vector<ScanPoint> deformation_scan(const SeparableClassicalHamiltonian& h, const ClassicalWavefunction& psi0,
                                        const std::function<double(double, double)>& rho0,
                                        const PerturbationSpec& base, const std::vector<double>& epsilons,
                                        double t, double dt);

std::vector<ScanPoint> stabilizer_scan(std::complex<double> alpha1, std::complex<double> alpha2,
                                       const std::vector<double>& lambda_list, double t_final, int n_trunc = 32);

void write_scan_csv(const std::string& path, const std::vector<ScanPoint>& points);

}  // namespace kvnlab
