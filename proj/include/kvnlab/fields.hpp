#pragma once

#include <complex>
#include <cstdint>
#include <functional>

#include "kvnlab/phase_grid.hpp"

namespace kvnlab {

// Normalized Gaussian wave packet
//   psi ~ exp(-(q-q0)^2/(4 sq^2) - (p-p0)^2/(4 sp^2) + i theta(q, p)),
// so the density is Gaussian with variances sq^2, sp^2.  theta may be null.
ClassicalWavefunction gaussian_wavefunction(const PhaseSpaceGrid& grid, double q0, double p0, double sigma_q,
                                            double sigma_p,
                                            const std::function<double(double, double)>& theta = nullptr);

// exp(i (kq q + kp p)) / sqrt(area); kq, kp need not be grid harmonics.
ClassicalWavefunction plane_wave(const PhaseSpaceGrid& grid, double kq, double kp);

// Normalized field with uniformly random complex amplitudes on modes
// |index| <= max_mode along both axes and nothing beyond.  Deterministic in seed.
ClassicalWavefunction random_band_limited_field(const PhaseSpaceGrid& grid, int max_mode, uint64_t seed);

}  // namespace kvnlab
