#include "kvnlab/spectral.hpp"

#include <fftw3.h>

#include <vector>

namespace kvnlab {

namespace {

fftw_complex* as_fftw(Eigen::MatrixXcd& a) { return reinterpret_cast<fftw_complex*>(a.data()); }

}  // namespace

FourierWorkspace::FourierWorkspace(const PhaseSpaceGrid& grid) : grid_(grid) {
  grid_.validate();
  const int nq = grid_.nq;
  const int np = grid_.np;
  // Column-major storage: index = iq + ip * nq.  Planning buffer is scratch only;
  // FFTW_UNALIGNED lets the plans run on any caller array of the same shape.
  std::vector<std::complex<double>> scratch(static_cast<size_t>(nq) * np);
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  // Along q: np contiguous batches of length nq.
  plan_q_fwd_ = fftw_plan_many_dft(1, &nq, np, buf, nullptr, 1, nq, buf, nullptr, 1, nq, FFTW_FORWARD, flags);
  plan_q_bwd_ = fftw_plan_many_dft(1, &nq, np, buf, nullptr, 1, nq, buf, nullptr, 1, nq, FFTW_BACKWARD, flags);
  // Along p: nq batches with stride nq.
  plan_p_fwd_ = fftw_plan_many_dft(1, &np, nq, buf, nullptr, nq, 1, buf, nullptr, nq, 1, FFTW_FORWARD, flags);
  plan_p_bwd_ = fftw_plan_many_dft(1, &np, nq, buf, nullptr, nq, 1, buf, nullptr, nq, 1, FFTW_BACKWARD, flags);
  // Full 2d transform; FFTW is row-major, so the slow axis is p here.
  plan_2d_fwd_ = fftw_plan_dft_2d(np, nq, buf, buf, FFTW_FORWARD, flags);
  plan_2d_bwd_ = fftw_plan_dft_2d(np, nq, buf, buf, FFTW_BACKWARD, flags);
}

FourierWorkspace::~FourierWorkspace() {
  fftw_destroy_plan(static_cast<fftw_plan>(plan_q_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_q_bwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_p_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_p_bwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_2d_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_2d_bwd_));
}

void FourierWorkspace::forward_q(Eigen::MatrixXcd& a) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_q_fwd_), as_fftw(a), as_fftw(a));
}
void FourierWorkspace::backward_q(Eigen::MatrixXcd& a) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_q_bwd_), as_fftw(a), as_fftw(a));
}
void FourierWorkspace::forward_p(Eigen::MatrixXcd& a) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_p_fwd_), as_fftw(a), as_fftw(a));
}
void FourierWorkspace::backward_p(Eigen::MatrixXcd& a) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_p_bwd_), as_fftw(a), as_fftw(a));
}
void FourierWorkspace::forward_2d(Eigen::MatrixXcd& a) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_2d_fwd_), as_fftw(a), as_fftw(a));
}
void FourierWorkspace::backward_2d(Eigen::MatrixXcd& a) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_2d_bwd_), as_fftw(a), as_fftw(a));
}

Eigen::MatrixXcd spectral_d_dq(const FourierWorkspace& w, const Eigen::MatrixXcd& field) {
  const PhaseSpaceGrid& g = w.grid();
  Eigen::MatrixXcd a = field;
  w.forward_q(a);
  const std::complex<double> im(0.0, 1.0);
  for (int i = 0; i < g.nq; ++i) {
    // The unpaired Nyquist mode carries no usable derivative information.
    const std::complex<double> mult = (i == g.nq / 2) ? 0.0 : im * g.freq_q(i) / static_cast<double>(g.nq);
    a.row(i) *= mult;
  }
  w.backward_q(a);
  return a;
}

Eigen::MatrixXcd spectral_d_dp(const FourierWorkspace& w, const Eigen::MatrixXcd& field) {
  const PhaseSpaceGrid& g = w.grid();
  Eigen::MatrixXcd a = field;
  w.forward_p(a);
  const std::complex<double> im(0.0, 1.0);
  for (int j = 0; j < g.np; ++j) {
    const std::complex<double> mult = (j == g.np / 2) ? 0.0 : im * g.freq_p(j) / static_cast<double>(g.np);
    a.col(j) *= mult;
  }
  w.backward_p(a);
  return a;
}

}  // namespace kvnlab
