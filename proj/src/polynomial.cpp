#include "pem/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pem {

Polynomial2::Polynomial2(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("polynomial degree must be >= 0");
  c_.assign(static_cast<std::size_t>(degree + 1) * (degree + 1), 0.0);
}

Polynomial2 Polynomial2::monomial(int i, int j, double coeff) {
  Polynomial2 p(i + j);
  p.set(i, j, coeff);
  return p;
}

double Polynomial2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i + j > degree_) return 0.0;
  return c_[slot(i, j)];
}

void Polynomial2::set(int i, int j, double c) {
  if (i < 0 || j < 0) throw std::invalid_argument("negative monomial exponent");
  if (i + j > degree_) {
    Polynomial2 grown(i + j);
    for (int a = 0; a <= degree_; ++a)
      for (int b = 0; a + b <= degree_; ++b) grown.c_[grown.slot(a, b)] = coeff(a, b);
    *this = std::move(grown);
  }
  c_[slot(i, j)] = c;
}

double Polynomial2::operator()(double x, double y) const {
  // Horner in y inside Horner in x.
  double acc = 0.0;
  for (int i = degree_; i >= 0; --i) {
    double row = 0.0;
    for (int j = degree_ - i; j >= 0; --j) row = row * y + c_[slot(i, j)];
    acc = acc * x + row;
  }
  return acc;
}

Jet Polynomial2::operator()(const Jet& x, const Jet& y) const {
  Jet acc(0.0);
  for (int i = degree_; i >= 0; --i) {
    Jet row(0.0);
    for (int j = degree_ - i; j >= 0; --j) row = row * y + Jet(c_[slot(i, j)]);
    acc = acc * x + row;
  }
  return acc;
}

Polynomial2 Polynomial2::derivative(int dx, int dy) const {
  if (dx < 0 || dy < 0) throw std::invalid_argument("negative derivative order");
  const int deg = std::max(0, degree_ - dx - dy);
  Polynomial2 out(deg);
  for (int i = dx; i <= degree_; ++i)
    for (int j = dy; i + j <= degree_; ++j) {
      double f = c_[slot(i, j)];
      for (int k = 0; k < dx; ++k) f *= i - k;
      for (int k = 0; k < dy; ++k) f *= j - k;
      out.c_[out.slot(i - dx, j - dy)] = f;
    }
  return out;
}

Polynomial2 Polynomial2::laplacian() const { return derivative(2, 0) + derivative(0, 2); }

double Polynomial2::max_abs_coeff() const {
  double m = 0.0;
  for (double c : c_) m = std::max(m, std::abs(c));
  return m;
}

bool Polynomial2::is_zero(double tol) const { return max_abs_coeff() <= tol; }

Polynomial2& Polynomial2::operator+=(const Polynomial2& o) {
  if (o.degree_ > degree_) {
    Polynomial2 grown(o.degree_);
    grown += *this;
    *this = std::move(grown);
  }
  for (int i = 0; i <= o.degree_; ++i)
    for (int j = 0; i + j <= o.degree_; ++j) c_[slot(i, j)] += o.c_[o.slot(i, j)];
  return *this;
}

Polynomial2& Polynomial2::operator-=(const Polynomial2& o) { return *this += -1.0 * o; }

Polynomial2& Polynomial2::operator*=(double s) {
  for (double& c : c_) c *= s;
  return *this;
}

Polynomial2 harmonic_polynomial(int n, bool imaginary_part) {
  if (n < 0) throw std::invalid_argument("harmonic polynomial degree must be >= 0");
  // (x + iy)^n = sum_j C(n,j) x^(n-j) (iy)^j; i^j cycles 1, i, -1, -i.
  Polynomial2 p(n);
  double binom = 1.0;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) binom = binom * (n - j + 1) / j;
    const bool real_term = (j % 2 == 0);
    const double sign = ((j / 2) % 2 == 0) ? 1.0 : -1.0;
    if (real_term != imaginary_part) p.set(n - j, j, sign * binom);
  }
  return p;
}

}  // namespace pem
