#include "kvnlab/fields.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "kvnlab/spectral.hpp"

namespace kvnlab {

ClassicalWavefunction gaussian_wavefunction(const PhaseSpaceGrid& grid, double q0, double p0, double sigma_q,
                                            double sigma_p, const std::function<double(double, double)>& theta) {
  if (!(sigma_q > 0.0) || !(sigma_p > 0.0))
    throw std::invalid_argument("gaussian_wavefunction: widths must be positive");
  ClassicalWavefunction psi = make_wavefunction(grid);
  for (int j = 0; j < grid.np; ++j) {
    const double p = grid.p(j);
    const double ep = (p - p0) / (2.0 * sigma_p);
    for (int i = 0; i < grid.nq; ++i) {
      const double q = grid.q(i);
      const double eq = (q - q0) / (2.0 * sigma_q);
      const double mag = std::exp(-eq * eq - ep * ep);
      const double ph = theta ? theta(q, p) : 0.0;
      psi.values(i, j) = std::polar(mag, ph);
    }
  }
  psi.normalize();
  return psi;
}

ClassicalWavefunction plane_wave(const PhaseSpaceGrid& grid, double kq, double kp) {
  ClassicalWavefunction psi = make_wavefunction(grid);
  const double amp = 1.0 / std::sqrt((grid.q_max - grid.q_min) * (grid.p_max - grid.p_min));
  for (int j = 0; j < grid.np; ++j)
    for (int i = 0; i < grid.nq; ++i) psi.values(i, j) = std::polar(amp, kq * grid.q(i) + kp * grid.p(j));
  return psi;
}

ClassicalWavefunction random_band_limited_field(const PhaseSpaceGrid& grid, int max_mode, uint64_t seed) {
  if (max_mode < 0 || max_mode >= grid.nq / 2 || max_mode >= grid.np / 2)
    throw std::invalid_argument("random_band_limited_field: band does not fit the grid");
  ClassicalWavefunction psi = make_wavefunction(grid);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  // Fill low modes in spectral space, then transform to the grid.
  Eigen::MatrixXcd spec = Eigen::MatrixXcd::Zero(grid.nq, grid.np);
  for (int mi = -max_mode; mi <= max_mode; ++mi)
    for (int mj = -max_mode; mj <= max_mode; ++mj) {
      const int i = (mi + grid.nq) % grid.nq;
      const int j = (mj + grid.np) % grid.np;
      spec(i, j) = std::complex<double>(unit(rng), unit(rng));
    }
  FourierWorkspace w(grid);
  w.backward_2d(spec);
  psi.values = spec;
  psi.normalize();
  return psi;
}

}  // namespace kvnlab
