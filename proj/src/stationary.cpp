#include "pem/stationary.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pem/errors.hpp"

namespace pem {

namespace {

constexpr double kPi = std::numbers::pi;

void require_admissible_radius(const ModelParams& p, double r_st) {
  if (!std::isfinite(r_st)) throw std::invalid_argument("r_st must be finite");
  if (r_st == p.r0)
    throw std::invalid_argument("r_st = r0: the annulus degenerates into a circle");
  if (!(r_st > p.r0)) throw std::invalid_argument("r_st must exceed r0");
}

double bisect(const Cubic& c, double lo, double hi, int iterations) {
  double flo = c(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = c(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string case_name(StationaryCase c) {
  return c == StationaryCase::dirichlet ? "dirichlet" : "neumann";
}

StationarySolution dirichlet_solution(const ModelParams& p, double r_st) {
  require_admissible_radius(p, r_st);
  const double ls = lame_star(p);
  const double L0 = std::log(p.r0), Ls = std::log(r_st);
  const double dL = L0 - Ls;
  const double dp = p.p_st - p.p_a;

  StationarySolution s;
  s.kind = StationaryCase::dirichlet;
  s.lame_star = ls;
  s.P0 = (p.p_st * L0 - p.p_a * Ls) / dL;
  s.C0 = -dp / dL;
  const double K = dp / (2.0 * ls * dL);
  s.C1 = (K * (r_st * Ls - p.r0 * p.r0 * L0 / r_st) + r_st - p.R0) * r_st /
         (r_st * r_st - p.r0 * p.r0);
  s.Cm1 = K * p.r0 * p.r0 * L0 - s.C1 * p.r0 * p.r0;
  return s;
}

StationarySolution neumann_solution(const ModelParams& p, double r_st) {
  require_admissible_radius(p, r_st);
  StationarySolution s;
  s.kind = StationaryCase::neumann;
  s.lame_star = lame_star(p);
  s.P0 = p.p_st;
  s.C0 = 0.0;
  s.C1 = r_st * (r_st - p.R0) / (r_st * r_st - p.r0 * p.r0);
  s.Cm1 = -s.C1 * p.r0 * p.r0;
  return s;
}

TractionBalance traction_balance(const StationarySolution& s, const ModelParams& p, double r) {
  const double a = lame_star(p) * s.displacement_r(r);
  const double b = p.lambda / r * s.displacement(r);
  const double c = p.F0 / (2.0 * kPi * r);
  return {a + b + c, std::abs(a) + std::abs(b) + std::abs(c)};
}

Cubic rst_polynomial(const ModelParams& p) {
  const double lm = p.lambda + p.mu;
  const double f = p.F0 / (4.0 * kPi);
  const double r02 = p.r0 * p.r0;
  return {lm, f - lm * p.R0, p.mu * r02, -(f + p.mu * p.R0) * r02};
}

RstReport rst_cubic(const ModelParams& p) {
  if (!(p.F0 >= 0.0)) throw std::invalid_argument("F0 must be >= 0");
  RstReport rep;
  rep.cubic = rst_polynomial(p);
  rep.roots = real_roots(rep.cubic);
  rep.critical = critical_points(rep.cubic);
  rep.value_at_r0 = rep.cubic(p.r0);
  rep.value_at_R0 = rep.cubic(p.R0);
  rep.bracket_ok = rep.value_at_r0 < 0.0 && rep.value_at_R0 > 0.0;
  for (const auto& r : rep.roots)
    if (r.value > p.r0 && r.value < p.R0) rep.admissible.push_back(r.value);

  rep.bisection_root = rep.bracket_ok ? bisect(rep.cubic, p.r0, p.R0, 200)
                                      : std::numeric_limits<double>::quiet_NaN();
  if (p.F0 == 0.0) {
    rep.r_st = p.R0;
  } else if (!rep.admissible.empty()) {
    rep.r_st = rep.admissible.back();
  } else {
    throw NoRootError("no root of the steady-radius cubic in (r0, R0)");
  }
  rep.residual = std::abs(rep.cubic(rep.r_st)) / rep.cubic.scale(rep.r_st);
  return rep;
}

TractionBalance dirichlet_condition(const ModelParams& p, double r_st) {
  return traction_balance(dirichlet_solution(p, r_st), p, r_st);
}

RstDirichletReport rst_dirichlet(const ModelParams& p) {
  if (!(p.F0 >= 0.0)) throw std::invalid_argument("F0 must be >= 0");
  constexpr int kSubintervals = 256;
  const double span = p.R0 - p.r0;
  const auto g = [&p](double r) { return dirichlet_condition(p, r).residual; };

  std::vector<double> xs{p.r0 + 1e-9 * span};
  for (int i = 1; i <= kSubintervals; ++i) xs.push_back(p.r0 + span * i / kSubintervals);
  xs.back() = p.R0;

  RstDirichletReport rep;
  std::vector<double> gs;
  gs.reserve(xs.size());
  for (double x : xs) gs.push_back(g(x));
  const auto zero_at = [&](std::size_t i) {
    return std::abs(gs[i]) <= 1e-13 * dirichlet_condition(p, xs[i]).scale;
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (zero_at(i)) {
      rep.roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 < xs.size() && !zero_at(i + 1) && (gs[i] < 0.0) != (gs[i + 1] < 0.0)) {
      std::uintmax_t iters = 200;
      const auto tol = [](double a, double b) {
        return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(std::abs(a), std::abs(b));
      };
      const auto [a, b] =
          boost::math::tools::toms748_solve(g, xs[i], xs[i + 1], gs[i], gs[i + 1], tol, iters);
      rep.roots.push_back(std::abs(g(a)) <= std::abs(g(b)) ? a : b);
    }
  }
  if (rep.roots.empty())
    throw NoRootError("no steady radius for the pressure-Dirichlet solution in (r0, R0]");
  rep.r_st = rep.roots.back();
  const auto bal = dirichlet_condition(p, rep.r_st);
  rep.residual = bal.scale > 0.0 ? std::abs(bal.residual) / bal.scale : 0.0;
  return rep;
}

ClosedFormField stationary_ring_field(const StationarySolution& s, RadialProfile varrho,
                                      RadialProfile theta) {
  return ClosedFormField([s, varrho, theta](const Jet&, const Jet& r, const Jet&) {
    ClosedFormField::Values v{};
    v[static_cast<int>(Var::u1)] = s.displacement(r);
    v[static_cast<int>(Var::p)] = s.pressure(r);
    v[static_cast<int>(Var::rho)] = varrho(r);
    v[static_cast<int>(Var::theta_f)] = theta(r);
    return v;
  });
}

ClosedFormField stationary_cartesian_field(const StationarySolution& s, RadialProfile varrho,
                                           RadialProfile theta) {
  return ClosedFormField([s, varrho, theta](const Jet&, const Jet& x, const Jet& y) {
    const Jet r = sqrt(x * x + y * y);
    const Jet w_over_r = s.displacement(r) / r;
    ClosedFormField::Values v{};
    v[static_cast<int>(Var::u1)] = w_over_r * x;
    v[static_cast<int>(Var::u2)] = w_over_r * y;
    v[static_cast<int>(Var::p)] = s.pressure(r);
    v[static_cast<int>(Var::rho)] = varrho(r);
    v[static_cast<int>(Var::theta_f)] = theta(r);
    return v;
  });
}

}  // namespace pem
