#include "kvnlab/phase_grid.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace kvnlab {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void put_u64(std::ofstream& out, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ofstream& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

uint64_t get_u64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("snapshot: truncated file");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::ifstream& in) {
  uint64_t bits = get_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void PhaseSpaceGrid::validate() const {
  if (!power_of_two(nq) || nq < 8) throw std::invalid_argument("PhaseSpaceGrid: nq must be a power of two >= 8");
  if (!power_of_two(np) || np < 8) throw std::invalid_argument("PhaseSpaceGrid: np must be a power of two >= 8");
  if (!(q_max > q_min) || !(p_max > p_min)) throw std::invalid_argument("PhaseSpaceGrid: bounds must be ordered");
}

void ClassicalWavefunction::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("ClassicalWavefunction: cannot normalize the zero field");
  values /= n;
}

double ClassicalWavefunction::boundary_tail_max() const {
  double m = 0.0;
  for (int j = 0; j < grid.np; ++j) m = std::max(m, std::abs(values(0, j)));
  for (int i = 0; i < grid.nq; ++i) m = std::max(m, std::abs(values(i, 0)));
  return m;
}

void ClassicalWavefunction::validate(double norm_tol) const {
  grid.validate();
  if (values.rows() != grid.nq || values.cols() != grid.np)
    throw std::invalid_argument("ClassicalWavefunction: value array does not match the grid");
  if (std::abs(norm() - 1.0) > norm_tol)
    throw std::invalid_argument("ClassicalWavefunction: field is not normalized");
}

ClassicalWavefunction make_wavefunction(const PhaseSpaceGrid& grid) {
  grid.validate();
  ClassicalWavefunction psi;
  psi.grid = grid;
  psi.values = Eigen::MatrixXcd::Zero(grid.nq, grid.np);
  return psi;
}

void write_snapshot(const std::string& path, const ClassicalWavefunction& psi, double time, double hbar) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("snapshot: cannot open '" + path + "' for writing");
  put_u64(out, static_cast<uint64_t>(psi.grid.nq));
  put_u64(out, static_cast<uint64_t>(psi.grid.np));
  put_f64(out, psi.grid.q_min);
  put_f64(out, psi.grid.q_max);
  put_f64(out, psi.grid.p_min);
  put_f64(out, psi.grid.p_max);
  put_f64(out, time);
  put_f64(out, hbar);
  for (int i = 0; i < psi.grid.nq; ++i)
    for (int j = 0; j < psi.grid.np; ++j) {
      put_f64(out, psi.values(i, j).real());
      put_f64(out, psi.values(i, j).imag());
    }
  if (!out) throw std::runtime_error("snapshot: write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open '" + path + "'");
  Snapshot snap;
  PhaseSpaceGrid g;
  g.nq = static_cast<int>(get_u64(in));
  g.np = static_cast<int>(get_u64(in));
  g.q_min = get_f64(in);
  g.q_max = get_f64(in);
  g.p_min = get_f64(in);
  g.p_max = get_f64(in);
  snap.time = get_f64(in);
  snap.hbar = get_f64(in);
  g.validate();
  snap.psi = make_wavefunction(g);
  for (int i = 0; i < g.nq; ++i)
    for (int j = 0; j < g.np; ++j) {
      const double re = get_f64(in);
      const double im = get_f64(in);
      snap.psi.values(i, j) = {re, im};
    }
  return snap;
}

void export_snapshot_csv(const Snapshot& snap, const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("snapshot: cannot open '" + path + "' for writing");
  std::fprintf(out, "q,p,re,im\n");
  const PhaseSpaceGrid& g = snap.psi.grid;
  for (int i = 0; i < g.nq; ++i)
    for (int j = 0; j < g.np; ++j)
      std::fprintf(out, "%.16e,%.16e,%.16e,%.16e\n", g.q(i), g.p(j), snap.psi.values(i, j).real(),
                   snap.psi.values(i, j).imag());
  std::fclose(out);
}

}  // namespace kvnlab
