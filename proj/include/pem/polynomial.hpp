#pragma once

#include <vector>

#include "pem/jet.hpp"

namespace pem {

/// Dense bivariate polynomial sum c_ij x^i y^j with i + j <= degree.
class Polynomial2 {
 public:
  Polynomial2() : Polynomial2(0) {}
  explicit Polynomial2(int degree);

  static Polynomial2 monomial(int i, int j, double coeff = 1.0);

  int degree() const { return degree_; }
  double coeff(int i, int j) const;
  void set(int i, int j, double c);
  void add(int i, int j, double c) { set(i, j, coeff(i, j) + c); }

  double operator()(double x, double y) const;
  Jet operator()(const Jet& x, const Jet& y) const;

  Polynomial2 derivative(int dx, int dy) const;
  Polynomial2 laplacian() const;

  /// True when every coefficient is within tol of zero.
  bool is_zero(double tol = 0.0) const;
  double max_abs_coeff() const;

  Polynomial2& operator+=(const Polynomial2& o);
  Polynomial2& operator-=(const Polynomial2& o);
  Polynomial2& operator*=(double s);
  friend Polynomial2 operator+(Polynomial2 a, const Polynomial2& b) { return a += b; }
  friend Polynomial2 operator-(Polynomial2 a, const Polynomial2& b) { return a -= b; }
  friend Polynomial2 operator*(double s, Polynomial2 a) { return a *= s; }

 private:
  std::size_t slot(int i, int j) const { return static_cast<std::size_t>(i) * (degree_ + 1) + j; }

  int degree_;
  std::vector<double> c_;  // (degree+1)^2, entries with i + j > degree stay zero
};

/// Re((x + iy)^n) or Im((x + iy)^n); harmonic for every n.
Polynomial2 harmonic_polynomial(int n, bool imaginary_part);

}  // namespace pem
