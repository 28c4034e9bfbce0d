#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace kvnlab {

// Dense univariate polynomial, coefficients stored in ascending power order.
// Trailing zeros are trimmed so degree() reflects the leading nonzero term.
class Polynomial {
 public:
  static constexpr int kMaxDegree = 16;

  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    trim();
    if (degree() > kMaxDegree) throw std::invalid_argument("Polynomial: degree above supported maximum");
  }

  static Polynomial constant(double c) { return Polynomial({c}); }

  static Polynomial monomial(int power, double coeff) {
    if (power < 0) throw std::invalid_argument("Polynomial: negative power");
    std::vector<double> c(power + 1, 0.0);
    c[power] = coeff;
    return Polynomial(std::move(c));
  }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<double> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return Polynomial(std::move(d));
  }

  // Antiderivative with zero constant term.
  Polynomial antiderivative() const {
    std::vector<double> a(c_.size() + 1, 0.0);
    for (size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(a));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coeffs() const { return c_; }

  double coeff(int power) const {
    if (power < 0 || power >= static_cast<int>(c_.size())) return 0.0;
    return c_[power];
  }

  Polynomial operator+(const Polynomial& o) const {
    std::vector<double> s(std::max(c_.size(), o.c_.size()), 0.0);
    for (size_t i = 0; i < c_.size(); ++i) s[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) s[i] += o.c_[i];
    return Polynomial(std::move(s));
  }

  Polynomial operator*(double a) const {
    std::vector<double> s(c_);
    for (double& v : s) v *= a;
    return Polynomial(std::move(s));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

// Dense polynomial in the phase-space pair (q, p).  coeff(i, j) multiplies q^i p^j.
class BivariatePolynomial {
 public:
  static constexpr int kMaxDegree = 16;

  struct Term {
    int q_power;
    int p_power;
    double coeff;
  };

  BivariatePolynomial() : c_(Eigen::MatrixXd::Zero(1, 1)) {}

  explicit BivariatePolynomial(Eigen::MatrixXd coeffs) : c_(std::move(coeffs)) {
    if (c_.rows() == 0 || c_.cols() == 0) c_ = Eigen::MatrixXd::Zero(1, 1);
    if (c_.rows() - 1 > kMaxDegree || c_.cols() - 1 > kMaxDegree)
      throw std::invalid_argument("BivariatePolynomial: degree above supported maximum");
  }

  static BivariatePolynomial from_terms(std::initializer_list<Term> terms) {
    int dq = 0, dp = 0;
    for (const auto& t : terms) {
      if (t.q_power < 0 || t.p_power < 0) throw std::invalid_argument("BivariatePolynomial: negative power");
      dq = std::max(dq, t.q_power);
      dp = std::max(dp, t.p_power);
    }
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dq + 1, dp + 1);
    for (const auto& t : terms) c(t.q_power, t.p_power) += t.coeff;
    return BivariatePolynomial(std::move(c));
  }

  static BivariatePolynomial constant(double v) { return from_terms({{0, 0, v}}); }

  // Lift a univariate polynomial into q or p alone.
  static BivariatePolynomial in_q(const Polynomial& f) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(std::max(f.degree(), 0) + 1, 1);
    for (int i = 0; i <= f.degree(); ++i) c(i, 0) = f.coeff(i);
    return BivariatePolynomial(std::move(c));
  }

  static BivariatePolynomial in_p(const Polynomial& f) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(1, std::max(f.degree(), 0) + 1);
    for (int j = 0; j <= f.degree(); ++j) c(0, j) = f.coeff(j);
    return BivariatePolynomial(std::move(c));
  }

  double operator()(double q, double p) const {
    // Horner over q of Horner-evaluated rows in p.
    double acc = 0.0;
    for (Eigen::Index i = c_.rows() - 1; i >= 0; --i) {
      double row = 0.0;
      for (Eigen::Index j = c_.cols() - 1; j >= 0; --j) row = row * p + c_(i, j);
      acc = acc * q + row;
    }
    return acc;
  }

  BivariatePolynomial d_dq() const {
    if (c_.rows() == 1) return BivariatePolynomial();
    Eigen::MatrixXd d(c_.rows() - 1, c_.cols());
    for (Eigen::Index i = 1; i < c_.rows(); ++i) d.row(i - 1) = static_cast<double>(i) * c_.row(i);
    return BivariatePolynomial(std::move(d));
  }

  BivariatePolynomial d_dp() const {
    if (c_.cols() == 1) return BivariatePolynomial();
    Eigen::MatrixXd d(c_.rows(), c_.cols() - 1);
    for (Eigen::Index j = 1; j < c_.cols(); ++j) d.col(j - 1) = static_cast<double>(j) * c_.col(j);
    return BivariatePolynomial(std::move(d));
  }

  // Antiderivative in p with zero integration constant.
  BivariatePolynomial antiderivative_p() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(c_.rows(), c_.cols() + 1);
    for (Eigen::Index j = 0; j < c_.cols(); ++j) a.col(j + 1) = c_.col(j) / static_cast<double>(j + 1);
    return BivariatePolynomial(std::move(a));
  }

  BivariatePolynomial antiderivative_q() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(c_.rows() + 1, c_.cols());
    for (Eigen::Index i = 0; i < c_.rows(); ++i) a.row(i + 1) = c_.row(i) / static_cast<double>(i + 1);
    return BivariatePolynomial(std::move(a));
  }

  // Restriction p = 0, kept as a bivariate value for uniform composition.
  BivariatePolynomial at_p_zero() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(c_.rows(), 1);
    a.col(0) = c_.col(0);
    return BivariatePolynomial(std::move(a));
  }

  BivariatePolynomial operator+(const BivariatePolynomial& o) const {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(std::max(c_.rows(), o.c_.rows()), std::max(c_.cols(), o.c_.cols()));
    s.topLeftCorner(c_.rows(), c_.cols()) += c_;
    s.topLeftCorner(o.c_.rows(), o.c_.cols()) += o.c_;
    return BivariatePolynomial(std::move(s));
  }

  BivariatePolynomial operator*(double a) const { return BivariatePolynomial(c_ * a); }

  double max_abs_coeff() const { return c_.cwiseAbs().maxCoeff(); }

  double coeff(int i, int j) const {
    if (i < 0 || j < 0 || i >= c_.rows() || j >= c_.cols()) return 0.0;
    return c_(i, j);
  }

  const Eigen::MatrixXd& coeffs() const { return c_; }

 private:
  Eigen::MatrixXd c_;
};

}  // namespace kvnlab
