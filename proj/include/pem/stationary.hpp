#pragma once

// Time-independent annulus solutions
//   P(r) = P0 + C0 ln r,   w(r) = C0/(2 lambda*) r ln r + C1 r + Cm1 / r
// and the steady outer radius r_st under a constant boundary load.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "pem/cubic.hpp"
#include "pem/field.hpp"
#include "pem/params.hpp"

namespace pem {

enum class StationaryCase { dirichlet, neumann };

std::string case_name(StationaryCase c);

struct StationarySolution {
  double P0 = 0.0;
  double C0 = 0.0;
  double C1 = 0.0;
  double Cm1 = 0.0;
  double lame_star = 1.0;
  StationaryCase kind = StationaryCase::neumann;

  template <class T>
  T pressure(const T& r) const {
    using std::log;
    return P0 + C0 * log(r);
  }
  template <class T>
  T displacement(const T& r) const {
    using std::log;
    return (C0 / (2.0 * lame_star)) * r * log(r) + C1 * r + Cm1 / r;
  }

  double pressure_r(double r) const { return C0 / r; }
  double displacement_r(double r) const {
    return C0 / (2.0 * lame_star) * (std::log(r) + 1.0) + C1 - Cm1 / (r * r);
  }
  double displacement_rr(double r) const {
    return C0 / (2.0 * lame_star * r) + 2.0 * Cm1 / (r * r * r);
  }
};

/// P(r0) = p_a, P(r_st) = p_st, w(r0) = 0, w(r_st) = r_st - R0.
/// Throws std::invalid_argument unless r0 < r_st.
StationarySolution dirichlet_solution(const ModelParams& params, double r_st);

/// Zero pressure flux at r0: P = p_st and w = A (r - r0^2 / r) with
/// w(r_st) = r_st - R0. Throws std::invalid_argument unless r0 < r_st.
StationarySolution neumann_solution(const ModelParams& params, double r_st);

/// lambda* w_r + lambda w / r + F0 / (2 pi r) at r, with its term scale.
struct TractionBalance {
  double residual;
  double scale;
};
TractionBalance traction_balance(const StationarySolution& s, const ModelParams& params,
                                 double r);

/// Coefficients of the steady-radius cubic for the zero-flux solution:
/// (lambda+mu) r^3 + (F0/4pi - (lambda+mu) R0) r^2 + mu r0^2 r - (F0/4pi + mu R0) r0^2.
Cubic rst_polynomial(const ModelParams& params);

struct RstReport {
  Cubic cubic;
  std::vector<CubicRoot> roots;                   ///< all real roots, ascending
  std::array<std::complex<double>, 2> critical{};  ///< critical points of the cubic
  std::vector<double> admissible;                 ///< roots in (r0, R0), ascending
  double r_st = 0.0;                              ///< selected root
  double value_at_r0 = 0.0;                       ///< cubic(r0)
  double value_at_R0 = 0.0;                       ///< cubic(R0)
  bool bracket_ok = false;                        ///< cubic(r0) < 0 < cubic(R0)
  double bisection_root = 0.0;                    ///< independent bisection on (r0, R0)
  double residual = 0.0;                          ///< |cubic(r_st)| / scale
};

/// Throws std::invalid_argument for F0 < 0 and NoRootError when F0 > 0 and
/// no root lies in (r0, R0). With F0 == 0 the selection is exactly R0; with
/// several admissible roots the one closest to R0 is selected.
RstReport rst_cubic(const ModelParams& params);

struct RstDirichletReport {
  std::vector<double> roots;  ///< every root found on (r0, R0], ascending
  double r_st = 0.0;          ///< the root closest to R0
  double residual = 0.0;      ///< relative traction residual at r_st
};

/// Steady radius for the pressure-Dirichlet solution: scans (r0, R0] with
/// 256 subintervals (plus a point close to r0), refines every sign change
/// and returns all roots. Throws NoRootError when nothing is found.
RstDirichletReport rst_dirichlet(const ModelParams& params);

/// Scalar condition solved by rst_dirichlet, as a function of r_st.
TractionBalance dirichlet_condition(const ModelParams& params, double r_st);

using RadialProfile = std::function<Jet(const Jet& r)>;

/// Stationary solution as a radial source in (t, r): u1 = w, p = P,
/// rho = varrho(r), theta_f = Theta(r), u2 = c = 0.
ClosedFormField stationary_ring_field(const StationarySolution& s, RadialProfile varrho,
                                      RadialProfile theta);

/// Same solution embedded in Cartesian coordinates: u = w(r) (x, y) / r.
ClosedFormField stationary_cartesian_field(const StationarySolution& s, RadialProfile varrho,
                                           RadialProfile theta);

}  // namespace pem
