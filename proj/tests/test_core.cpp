#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "pem/errors.hpp"
#include "pem/field.hpp"
#include "pem/jet.hpp"
#include "pem/params.hpp"

using namespace pem;

namespace {

ModelParams baseline() {
  ModelParams p;
  p.k = 1;
  p.D = 1;
  p.rho_f0 = 1;
  p.S_sieve = 0.5;
  p.lambda = 1;
  p.mu = 1;
  p.r0 = 1;
  p.R0 = 2;
  return p;
}

bool mentions(const ParameterError& e, const std::string& needle) {
  for (const auto& v : e.violations())
    if (v == needle) return true;
  return false;
}

}  // namespace

TEST_CASE("baseline parameters are accepted unchanged") {
  const ModelParams p = baseline();
  CHECK(validate_params(p) == p);
  CHECK(param_violations(p).empty());
}

TEST_CASE("validation is idempotent") {
  const ModelParams once = validate_params(baseline());
  CHECK(validate_params(once) == once);
}

TEST_CASE("sieving coefficient of one is rejected") {
  ModelParams p = baseline();
  p.S_sieve = 1.0;
  try {
    validate_params(p);
    FAIL("expected ParameterError");
  } catch (const ParameterError& e) {
    CHECK(mentions(e, "0 < S < 1"));
    CHECK(e.violations().size() == 1);
  }
}

TEST_CASE("inverted radii are rejected") {
  ModelParams p = baseline();
  p.r0 = 2;
  p.R0 = 1;
  try {
    validate_params(p);
    FAIL("expected ParameterError");
  } catch (const ParameterError& e) {
    CHECK(mentions(e, "r0 < R0"));
  }
}

TEST_CASE("every violation is reported at once") {
  ModelParams p = baseline();
  p.k = 0;
  p.D = -1;
  p.rho_f0 = 0;
  p.lambda = -2;
  p.mu = 0;
  p.S_sieve = 0;
  p.r0 = 0;
  try {
    validate_params(p);
    FAIL("expected ParameterError");
  } catch (const ParameterError& e) {
    CHECK(mentions(e, "k must be > 0"));
    CHECK(mentions(e, "D must be > 0"));
    CHECK(mentions(e, "rho_f0 must be > 0"));
    CHECK(mentions(e, "lambda must be > 0"));
    CHECK(mentions(e, "mu must be > 0"));
    CHECK(mentions(e, "0 < S < 1"));
    CHECK(mentions(e, "r0 must be > 0"));
    CHECK(std::string(e.what()).find("k must be > 0") != std::string::npos);
  }
}

TEST_CASE("non-finite parameters are rejected") {
  ModelParams p = baseline();
  p.F0 = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate_params(p), ParameterError);
  CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
}

TEST_CASE("lame_star") {
  ModelParams p = baseline();
  CHECK(lame_star(p) == 3.0);
  p.lambda = 1e-300;
  CHECK(lame_star(p) == doctest::Approx(2.0));
  p.lambda = 2.0;
  p.mu = 0.5;
  CHECK(lame_star(p) == 3.0);
}

TEST_CASE("mixture fields") {
  const ModelParams p = baseline();
  SUBCASE("hand substitution") {
    const auto m = mixture_fields(0.5, 1.5, p);
    CHECK(m.theta_m == 0.5);
    CHECK(m.rho_m == 2.0);
  }
  SUBCASE("nearly pure matrix") {
    const auto m = mixture_fields(1e-12, 3.0, p);
    CHECK(m.rho_m == doctest::Approx(3.0).epsilon(1e-10));
  }
  SUBCASE("equal densities") {
    CHECK(mixture_fields(0.5, p.rho_f0, p).rho_m == doctest::Approx(p.rho_f0));
  }
  SUBCASE("round trip over random states") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> th(0.01, 0.99), rho(1.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
      const double t = th(rng), r = rho(rng);
      const auto m = mixture_fields(t, r, p);
      CHECK(std::abs(p.rho_f0 * t + m.rho_m * m.theta_m - r) <= 1e-14 * r);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(mixture_fields(0.0, 1.0, p), std::domain_error);
    CHECK_THROWS_AS(mixture_fields(1.0, 1.0, p), std::domain_error);
    CHECK_THROWS_AS(mixture_fields(0.5, 0.4, p), std::domain_error);
  }
}

TEST_CASE("isotropic moduli round trip") {
  for (double lambda : {0.1, 1.0, 2.5, 7.0})
    for (double mu : {0.3, 1.0, 4.0}) {
      const auto m = AnisotropicModuli::isotropic(lambda, mu);
      CHECK(m.lambda() == lambda);
      CHECK(m.mu() == mu);
      CHECK(m.e11 == lambda + 2 * mu);
      CHECK(m.e22 == m.e11);
      CHECK(m.e13 == 0.0);
      CHECK(m.e23 == 0.0);
      CHECK(m.is_isotropic());
    }
  auto m = AnisotropicModuli::isotropic(1, 1);
  m.e13 = 0.1;
  CHECK_FALSE(m.is_isotropic(1e-12));
  CHECK(validate_moduli(m) == m);
  m.e11 = 0.0;
  CHECK_THROWS_AS(validate_moduli(m), ParameterError);
  m = AnisotropicModuli::isotropic(1, 1);
  m.e23 = -0.5;
  CHECK_THROWS_AS(validate_moduli(m), ParameterError);
}

TEST_CASE("reference scales make the geometry and moduli dimensionless") {
  ModelParams p = baseline();
  p.k = 0.2;
  p.mu = 5.0;
  p.lambda = 10.0;
  p.R0 = 4.0;
  p.r0 = 2.0;
  p.F0 = 30.0;
  p.p_st = 2.5;
  const Scales s = Scales::reference(p);
  const ModelParams q = nondimensionalize(p, s);
  CHECK(q.R0 == doctest::Approx(1.0));
  CHECK(q.r0 == doctest::Approx(0.5));
  CHECK(q.mu == doctest::Approx(1.0));
  CHECK(q.lambda == doctest::Approx(2.0));
  CHECK(q.k == doctest::Approx(1.0));
  CHECK(q.p_st == doctest::Approx(0.5));
  CHECK(q.F0 == doctest::Approx(30.0 / (5.0 * 4.0)));
  CHECK(nondimensionalize(p, Scales{}) == p);
}

TEST_CASE("jets carry exact second derivatives") {
  const Jet t = Jet::variable(0.3, 0), x = Jet::variable(1.2, 1), y = Jet::variable(-0.7, 2);
  const Jet f = sin(x * y) * exp(t) + log(x) * pow(y, 3) / sqrt(x);
  const double X = 1.2, Y = -0.7, T = 0.3;
  CHECK(f.value() == doctest::Approx(std::sin(X * Y) * std::exp(T) +
                                     std::log(X) * Y * Y * Y / std::sqrt(X)));
  // d/dt, d2/dxdt, d2/dy2
  CHECK(f.derivative({1, 0, 0}) == doctest::Approx(std::sin(X * Y) * std::exp(T)));
  CHECK(f.derivative({1, 1, 0}) == doctest::Approx(Y * std::cos(X * Y) * std::exp(T)));
  const double fyy = -X * X * std::sin(X * Y) * std::exp(T) + 6.0 * Y * std::log(X) / std::sqrt(X);
  CHECK(f.derivative({0, 0, 2}) == doctest::Approx(fyy));
  CHECK(std::isnan(f.derivative({1, 1, 1})));
}

TEST_CASE("closed-form field derivatives") {
  const ClosedFormField field([](const Jet& t, const Jet& x, const Jet& y) {
    ClosedFormField::Values v{};
    v[0] = t * x * x;
    v[2] = x * y + t * t;
    return v;
  });
  const Point at{2.0, 3.0, -1.0};
  CHECK(field.value(Var::u1, at) == 18.0);
  CHECK(field.value(Var::u1, at, {1, 1, 0}) == 6.0);
  CHECK(field.value(Var::u1, at, {0, 2, 0}) == 4.0);
  CHECK(field.value(Var::p, at, {0, 1, 1}) == 1.0);
  CHECK(field.value(Var::p, at, {2, 0, 0}) == 2.0);
  CHECK(field.value(Var::c, at, {0, 1, 0}) == 0.0);
  CHECK_THROWS_AS(field.value(Var::u1, at, {1, 1, 1}), DerivativeUnavailable);
}

TEST_CASE("grid field derivatives") {
  const ClosedFormField smooth([](const Jet& t, const Jet& x, const Jet& y) {
    ClosedFormField::Values v{};
    v[0] = sin(x) * cos(y) * exp(t);
    v[1] = x * x * y + t * y;
    return v;
  });
  SUBCASE("quadratics are reproduced exactly away from rounding") {
    const GridSpec spec = GridSpec::square(6, 0.1, 0.0, 0.1);
    const GridField grid = GridField::sample(smooth, spec);
    for (int ix : {0, 3, 6, 12})
      for (int iy : {0, 5, 12}) {
        const Point p = grid.node(1, ix, iy);
        CHECK(grid.value(Var::u2, p, {0, 1, 1}) == doctest::Approx(2.0 * p.x).epsilon(1e-9));
        CHECK(grid.value(Var::u2, p, {0, 2, 0}) == doctest::Approx(2.0 * p.y).epsilon(1e-9));
        CHECK(grid.value(Var::u2, p, {1, 0, 1}) == doctest::Approx(1.0).epsilon(1e-9));
      }
  }
  SUBCASE("mixed partials commute") {
    const GridSpec spec = GridSpec::square(5, 0.2, 0.0, 0.1);
    const GridField grid = GridField::sample(smooth, spec);
    const Point p = grid.node(1, 2, 7);
    CHECK(grid.value(Var::u1, p, {0, 1, 1}) == grid.value(Var::u1, p, {0, 1, 1}));
  }
  SUBCASE("second-order convergence at interior and edge nodes") {
    for (const auto& [ix_frac, iy_frac] : {std::pair{0.5, 0.5}, std::pair{0.0, 0.5}}) {
      double prev = 0.0;
      for (int level = 0; level < 3; ++level) {
        const int half = 4 << level;
        const double h = 0.4 / half;
        const GridSpec spec = GridSpec::square(half, h, 0.0, 0.05);
        const GridField grid = GridField::sample(smooth, spec);
        const Point p = grid.node(1, static_cast<int>(ix_frac * 2 * half),
                                  static_cast<int>(iy_frac * 2 * half));
        double err = 0.0;
        for (DerivIndex d : {DerivIndex{0, 2, 0}, DerivIndex{0, 1, 1}, DerivIndex{0, 0, 2},
                             DerivIndex{0, 1, 0}})
          err = std::max(err, std::abs(grid.value(Var::u1, p, d) - smooth.value(Var::u1, p, d)));
        if (level > 0) {
          const double ratio = prev / err;
          CHECK(ratio > 3.5);
          CHECK(ratio < 4.5);
        }
        prev = err;
      }
    }
  }
  SUBCASE("deterministic and bounded queries") {
    const GridSpec spec = GridSpec::square(3, 0.5, 0.0, 0.1);
    const GridField grid = GridField::sample(smooth, spec);
    const Point p{0.0, 0.25, -0.1};
    CHECK(grid.value(Var::u1, p, {0, 1, 0}) == grid.value(Var::u1, p, {0, 1, 0}));
    CHECK_THROWS_AS(grid.value(Var::u1, Point{0.0, 5.0, 0.0}), std::out_of_range);
    GridSpec flat = spec;
    flat.nt = 1;
    const GridField slice = GridField::sample(smooth, flat);
    CHECK_THROWS_AS(slice.value(Var::u1, Point{flat.t0, 0.0, 0.0}, {1, 0, 0}),
                    DerivativeUnavailable);
  }
}
