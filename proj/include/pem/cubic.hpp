#pragma once

// Real roots of a cubic a3 r^3 + a2 r^2 + a1 r + a0 by bracketing between
// the critical points, with multiplicities.

#include <array>
#include <complex>
#include <vector>

namespace pem {

struct Cubic {
  double a3 = 1.0, a2 = 0.0, a1 = 0.0, a0 = 0.0;

  double operator()(double r) const { return ((a3 * r + a2) * r + a1) * r + a0; }
  double derivative(double r) const { return (3.0 * a3 * r + 2.0 * a2) * r + a1; }
  /// Sum of the term magnitudes at r, the reference for "zero" at r.
  double scale(double r) const;
};

struct CubicRoot {
  double value;
  int multiplicity;
};

/// Roots of 3 a3 r^2 + 2 a2 r + a1, complex when the discriminant is negative.
std::array<std::complex<double>, 2> critical_points(const Cubic& c);

/// All real roots in ascending order. Each root is bracketed on an interval
/// where the cubic is monotone and refined to full precision; a critical
/// point where the cubic vanishes is reported as a repeated root. Throws
/// std::invalid_argument if a3 == 0 or a coefficient is not finite.
std::vector<CubicRoot> real_roots(const Cubic& c);

}  // namespace pem
