#pragma once

#include <Eigen/Dense>
#include <complex>

#include "kvnlab/phase_grid.hpp"

namespace kvnlab {

// Batched FFT plans for one grid shape.  Transforms are unnormalized in both
// directions; callers fold the 1/n factors into their multipliers.  Plans are
// created once (estimate mode, deterministic) and reused; instances are not
// shareable across threads because executions run on caller-owned buffers.
class FourierWorkspace {
 public:
  explicit FourierWorkspace(const PhaseSpaceGrid& grid);
  ~FourierWorkspace();

  FourierWorkspace(const FourierWorkspace&) = delete;
  FourierWorkspace& operator=(const FourierWorkspace&) = delete;

  // In-place transforms over a nq x np column-major field.
  void forward_q(Eigen::MatrixXcd& a) const;
  void backward_q(Eigen::MatrixXcd& a) const;
  void forward_p(Eigen::MatrixXcd& a) const;
  void backward_p(Eigen::MatrixXcd& a) const;
  void forward_2d(Eigen::MatrixXcd& a) const;
  void backward_2d(Eigen::MatrixXcd& a) const;

  const PhaseSpaceGrid& grid() const { return grid_; }

 private:
  PhaseSpaceGrid grid_;
  void* plan_q_fwd_;
  void* plan_q_bwd_;
  void* plan_p_fwd_;
  void* plan_p_bwd_;
  void* plan_2d_fwd_;
  void* plan_2d_bwd_;
};

// Spectral partial derivatives (normalized, Nyquist mode dropped).
Eigen::MatrixXcd spectral_d_dq(const FourierWorkspace& w, const Eigen::MatrixXcd& field);
Eigen::MatrixXcd spectral_d_dp(const FourierWorkspace& w, const Eigen::MatrixXcd& field);

}  // namespace kvnlab
