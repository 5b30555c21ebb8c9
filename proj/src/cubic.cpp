#include "pem/cubic.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace pem {

namespace {

constexpr double kZeroTol = 1e-13;

bool vanishes(const Cubic& c, double r) { return std::abs(c(r)) <= kZeroTol * c.scale(r); }

double refine(const Cubic& c, double lo, double hi) {
  std::uintmax_t iters = 200;
  const auto tol = [](double a, double b) {
    return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(std::abs(a), std::abs(b));
  };
  const auto f = [&c](double r) { return c(r); };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, c(lo), c(hi), tol, iters);
  const double mid = 0.5 * (a + b);
  // Keep whichever end (or the midpoint) has the smallest residual.
  double best = mid;
  for (double r : {a, b})
    if (std::abs(c(r)) < std::abs(c(best))) best = r;
  return best;
}

}  // namespace

double Cubic::scale(double r) const {
  const double ar = std::abs(r);
  return std::abs(a3) * ar * ar * ar + std::abs(a2) * ar * ar + std::abs(a1) * ar + std::abs(a0);
}

std::array<std::complex<double>, 2> critical_points(const Cubic& c) {
  // 3 a3 r^2 + 2 a2 r + a1 = 0 with the cancellation-free quadratic formula.
  const double A = 3.0 * c.a3, B = 2.0 * c.a2, C = c.a1;
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) {
    const double re = -B / (2.0 * A), im = std::sqrt(-disc) / (2.0 * A);
    return {std::complex<double>(re, -im), std::complex<double>(re, im)};
  }
  const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  if (q == 0.0) return {std::complex<double>(0.0), std::complex<double>(0.0)};
  double r1 = q / A, r2 = C / q;
  if (r1 > r2) std::swap(r1, r2);
  return {std::complex<double>(r1), std::complex<double>(r2)};
}

std::vector<CubicRoot> real_roots(const Cubic& c) {
  for (double a : {c.a3, c.a2, c.a1, c.a0})
    if (!std::isfinite(a)) throw std::invalid_argument("cubic coefficients must be finite");
  if (c.a3 == 0.0) throw std::invalid_argument("leading cubic coefficient must be nonzero");

  // Cauchy bound: every real root lies in [-bound, bound].
  const double bound =
      1.0 + std::max({std::abs(c.a2 / c.a3), std::abs(c.a1 / c.a3), std::abs(c.a0 / c.a3)});

  std::vector<double> breaks{-bound};
  const auto crit = critical_points(c);
  if (crit[0].imag() == 0.0) {
    breaks.push_back(crit[0].real());
    if (crit[1].real() != crit[0].real()) breaks.push_back(crit[1].real());
  }
  breaks.push_back(bound);

  std::vector<CubicRoot> roots;
  // Repeated roots sit on critical points.
  const bool coincident = crit[0].imag() == 0.0 && crit[0].real() == crit[1].real();
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i)
    if (vanishes(c, breaks[i])) roots.push_back({breaks[i], coincident ? 3 : 2});

  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    const bool lo_root = i > 0 && vanishes(c, lo);
    const bool hi_root = i + 2 < breaks.size() && vanishes(c, hi);
    if (lo_root || hi_root) continue;
    const double flo = c(lo), fhi = c(hi);
    if (flo == 0.0) {
      roots.push_back({lo, 1});
    } else if ((flo < 0.0) != (fhi < 0.0)) {
      roots.push_back({refine(c, lo, hi), 1});
    }
  }
  std::sort(roots.begin(), roots.end(),
            [](const CubicRoot& a, const CubicRoot& b) { return a.value < b.value; });
  return roots;
}

}  // namespace pem
