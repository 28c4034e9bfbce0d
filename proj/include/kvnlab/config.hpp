#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "kvnlab/perturbation.hpp"

namespace kvnlab {

enum class ExperimentKind { gaussian, kvn, doubled, stabilizer, deformation, verify };

std::string experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);

// Flat experiment configuration.  Every field has a documented default so a
// minimal file like "[run]\nexperiment = verify" is complete; the effective
// values are echoed into every report.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::verify;

  // [physics]
  double hbar = 1.0;
  double m = 1.0;
  double omega = 1.0;

  // [grid]
  int nq = 256;
  int np = 256;
  double q_min = -8.0;
  double q_max = 8.0;
  double p_min = -8.0;
  double p_max = 8.0;

  // [run]  (dt defaults to period/2000, t_final to one period)
  double dt = 0.0;
  double t_final = 0.0;
  int sample_stride = 10;
  std::uint64_t seed = 12345;
  double sigma_m = 1.0;

  // [state]  grid experiments use the Gaussian; Fock experiments the alphas
  double q_center = 0.5;
  double p_center = 0.0;
  double sigma_q = 0.65;
  double sigma_p = 0.65;
  double alpha1_re = 1.0;
  double alpha1_im = 0.0;
  double alpha2_re = 0.5;
  double alpha2_im = 0.0;
  int n_trunc = 32;

  // [perturbation]
  PerturbationKind kind = PerturbationKind::none;
  double lambda = std::numeric_limits<double>::infinity();
  double epsilon = 0.0;

  // [io]
  std::string output_dir = "out";
  std::vector<std::string> formats{"csv", "json"};

  bool operator==(const ExperimentConfig&) const = default;

  double period() const;        // 2 pi / omega
  PhaseSpaceGrid grid() const;
  PerturbationSpec perturbation() const;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

// Canonical text form: every key explicit, fixed section order, values that
// re-parse to an identical config.
std::string serialize_config(const ExperimentConfig& cfg);

// Directory all artifacts of a run go to; KVNLAB_OUTPUT_ROOT reroots it.
std::string resolve_output_dir(const ExperimentConfig& cfg);

}  // namespace kvnlab
