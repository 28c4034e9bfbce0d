#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>

namespace kvnlab {

// Uniform periodic grid over [q_min, q_max) x [p_min, p_max).
// Node counts must be powers of two (>= 8) so spectral transforms stay exact-size.
struct PhaseSpaceGrid {
  int nq = 256;
  int np = 256;
  double q_min = -8.0, q_max = 8.0;
  double p_min = -8.0, p_max = 8.0;

  double dq() const { return (q_max - q_min) / nq; }
  double dp() const { return (p_max - p_min) / np; }
  double cell() const { return dq() * dp(); }
  double q(int i) const { return q_min + i * dq(); }
  double p(int j) const { return p_min + j * dp(); }

  // Angular frequency of mode i along q, standard FFT ordering (Nyquist negative).
  double freq_q(int i) const {
    const int k = (i <= nq / 2 - 1) ? i : i - nq;
    return 2.0 * M_PI * k / (q_max - q_min);
  }
  double freq_p(int j) const {
    const int k = (j <= np / 2 - 1) ? j : j - np;
    return 2.0 * M_PI * k / (p_max - p_min);
  }

  void validate() const;
  bool operator==(const PhaseSpaceGrid& o) const {
    return nq == o.nq && np == o.np && q_min == o.q_min && q_max == o.q_max && p_min == o.p_min && p_max == o.p_max;
  }
};

// Complex field on a phase-space grid; values(iq, ip).
// Physical norm is sum |psi|^2 dq dp and should stay 1 under evolution.
struct ClassicalWavefunction {
  PhaseSpaceGrid grid;
  Eigen::MatrixXcd values;

  double norm_squared() const { return values.cwiseAbs2().sum() * grid.cell(); }
  double norm() const { return std::sqrt(norm_squared()); }
  void normalize();

  // Largest |psi| on the periodic seam (first q row and first p column).
  double boundary_tail_max() const;

  Eigen::MatrixXd density() const { return values.cwiseAbs2(); }

  void validate(double norm_tol = 1e-10) const;
};

ClassicalWavefunction make_wavefunction(const PhaseSpaceGrid& grid);

// ---- snapshot io ----
// Little-endian binary layout: int64 nq, int64 np, f64 q_min, q_max, p_min, p_max,
// f64 time, f64 hbar, then row-major (q outer, p inner) interleaved re/im f64 pairs.

struct Snapshot {
  ClassicalWavefunction psi;
  double time = 0.0;
  double hbar = 1.0;
};

void write_snapshot(const std::string& path, const ClassicalWavefunction& psi, double time, double hbar);
Snapshot read_snapshot(const std::string& path);

// One CSV row per node: q, p, re, im.
void export_snapshot_csv(const Snapshot& snap, const std::string& path);

}  // namespace kvnlab
