#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kvnlab {

// Symplectic form of two adjacent canonical pairs: blockdiag(J, J) with J = [[0,1],[-1,0]].
inline Eigen::Matrix4d pairwise_symplectic_form() {
  Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
  w(0, 1) = 1.0;
  w(1, 0) = -1.0;
  w(2, 3) = 1.0;
  w(3, 2) = -1.0;
  return w;
}

// Labels and commutation data for a 4-component mode vector r.
// Convention: [r_i, r_j] = i*hbar*omega(i, j).
struct CanonicalLayout {
  std::array<std::string, 4> names;
  Eigen::Matrix4d omega;
  double hbar = 1.0;

  // Two independent oscillators in the order (q1, p1, q2, p2).
  static CanonicalLayout oscillator_pair(double hbar = 1.0) {
    return CanonicalLayout{{"q1", "p1", "q2", "p2"}, pairwise_symplectic_form(), hbar};
  }

  // Collective variables (q, P, Q, p): pairs (q, P) and (Q, p) are conjugate,
  // every cross commutator vanishes.  Components 0 and 3 form the classical sector.
  static CanonicalLayout qmfs(double hbar = 1.0) {
    return CanonicalLayout{{"q", "P", "Q", "p"}, pairwise_symplectic_form(), hbar};
  }

  int index_of(std::string_view name) const {
    for (int i = 0; i < 4; ++i)
      if (names[i] == name) return i;
    throw std::invalid_argument("CanonicalLayout: unknown variable name '" + std::string(name) + "'");
  }

  bool compatible_with(const CanonicalLayout& o) const {
    return names == o.names && hbar == o.hbar && (omega - o.omega).cwiseAbs().maxCoeff() == 0.0;
  }

  void validate() const {
    if (!(hbar > 0.0)) throw std::invalid_argument("CanonicalLayout: hbar must be positive");
    if ((omega + omega.transpose()).cwiseAbs().maxCoeff() > 0.0)
      throw std::invalid_argument("CanonicalLayout: omega must be antisymmetric");
    if ((omega * omega + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("CanonicalLayout: omega^2 must equal -I for a pair ordering");
  }
};

}  // namespace kvnlab
