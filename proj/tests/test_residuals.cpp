#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pem/errors.hpp"
#include "pem/field.hpp"
#include "pem/residuals.hpp"
#include "pem/symmetry.hpp"

using namespace pem;

namespace {

using Values = ClosedFormField::Values;

ClosedFormField make(std::function<void(Values&, const Jet&, const Jet&, const Jet&)> fill) {
  return ClosedFormField([fill](const Jet& t, const Jet& x, const Jet& y) {
    Values v{};
    fill(v, t, x, y);
    return v;
  });
}

constexpr int kU1 = 0, kU2 = 1, kP = 2, kRho = 3, kTh = 4, kC = 5;

double rel_diff(double a, double b, double scale) {
  return std::abs(a - b) / std::max(scale, 1e-300);
}

}  // namespace

TEST_CASE("constant state has zero Cartesian residuals") {
  ModelParams prm;
  prm.sigma1 = 0.7;
  const auto f = make([](Values& v, auto&, auto&, auto&) {
    v[kP] = 3.0;
    v[kRho] = 1.4;
    v[kTh] = 0.3;
  });
  const auto r = residual_cartesian_iso(f, prm, {0.4, 0.1, -0.2});
  for (double x : r.value) CHECK(x == 0.0);
  const auto a = residual_cartesian_aniso(f, AnisotropicModuli{2, 3, 1, 0.5, 0.2, 0.1}, prm,
                                          {0.4, 0.1, -0.2});
  for (double x : a.value) CHECK(x == 0.0);
}

TEST_CASE("quadratic displacement gives the elastic momentum residual") {
  ModelParams prm;
  prm.lambda = 1.5;
  prm.mu = 0.7;
  const auto f = make([](Values& v, auto&, const Jet& x, auto&) { v[kU1] = x * x; });
  const auto r = residual_cartesian_iso(f, prm, {0.0, 0.3, 0.9});
  CHECK(r[Equation::momentum1] == doctest::Approx(-2.0 * lame_star(prm)));
  CHECK(r[Equation::continuity] == 0.0);
  CHECK(r[Equation::momentum2] == 0.0);
  CHECK(r[Equation::density] == 0.0);
  CHECK(r[Equation::porosity] == 0.0);
  CHECK(r[Equation::solute] == 0.0);
}

TEST_CASE("dilatation rate balances the pressure Laplacian") {
  ModelParams prm;
  prm.k = 2.0;
  const auto f = make([&](Values& v, const Jet& t, const Jet& x, auto&) {
    v[kU1] = t * x;
    v[kP] = x * x / prm.k;
    v[kRho] = 1.0;
    v[kTh] = 0.5;
  });
  const auto r = residual_cartesian_iso(f, prm, {0.5, 0.2, 0.1});
  CHECK(r[Equation::continuity] == doctest::Approx(0.0));
  CHECK(r.scale[0] == doctest::Approx(4.0));
}

TEST_CASE("anisotropic residual by hand") {
  ModelParams prm;
  AnisotropicModuli m{2.0, 1e-3, 1e-3, 0.0, 1.0, 0.0};
  const auto f = make([](Values& v, auto&, const Jet& x, auto&) { v[kU1] = x * x; });
  const auto r = residual_cartesian_aniso(f, m, prm, {0.0, 0.5, 0.5});
  CHECK(r[Equation::momentum1] == doctest::Approx(-4.0));
  CHECK(r[Equation::momentum2] == doctest::Approx(-2.0));
}

TEST_CASE("isotropic embedding of the anisotropic residual") {
  ModelParams prm;
  prm.lambda = 1.3;
  prm.mu = 0.8;
  prm.sigma1 = 0.4;
  prm.k = 0.9;
  const auto m = AnisotropicModuli::isotropic(prm.lambda, prm.mu);
  for (unsigned seed = 0; seed < 100; ++seed) {
    const auto f = random_polynomial_field(seed, 3);
    const Point p{0.1 * seed / 100.0, 0.3 - 0.005 * seed, -0.2 + 0.004 * seed};
    const auto iso = residual_cartesian_iso(f, prm, p);
    const auto ani = residual_cartesian_aniso(f, m, prm, p);
    for (int i = 0; i < kEquationCount; ++i)
      CHECK(rel_diff(iso.value[i], ani.value[i], iso.scale[i]) <= 1e-12);
  }
}

TEST_CASE("missing derivatives propagate") {
  ModelParams prm;
  const auto f = random_polynomial_field(1, 2);
  GridSpec spec = GridSpec::square(3, 0.1, 0.0, 0.1);
  spec.nt = 1;
  const GridField grid = GridField::sample(f, spec);
  CHECK_THROWS_AS(residual_cartesian_iso(grid, prm, {spec.t0, 0.0, 0.0}), DerivativeUnavailable);
}

TEST_CASE("polar residuals") {
  ModelParams prm;
  prm.lambda = 1.2;
  prm.mu = 0.6;
  prm.sigma1 = 0.3;
  prm.k = 0.8;
  prm.D = 0.4;
  SUBCASE("constant state") {
    const auto f = make([](Values& v, auto&, auto&, auto&) {
      v[kP] = 1.0;
      v[kRho] = 2.0;
      v[kTh] = 0.4;
    });
    CHECK(residual_radial_full(f, prm, {0.0, 1.0, 0.3}).max_abs() == 0.0);
    CHECK(residual_radial_reduced(f, prm, {0.0, 1.0, 0.3}).max_abs() == 0.0);
  }
  SUBCASE("angle-independent profiles reduce") {
    const auto f = make([](Values& v, const Jet& t, const Jet& r, auto&) {
      v[kU1] = t * r * r + 0.1 * r;
      v[kU2] = t * t * r;
      v[kP] = log(r) * (1.0 + t);
      v[kRho] = 2.0 + 0.1 * r * t;
      v[kTh] = 0.5 - 0.1 * r + 0.2 * t;
      v[kC] = r * r * t;
    });
    for (double r : {0.5, 1.0, 1.7}) {
      const Point p{0.3, r, 0.9};
      const auto full = residual_radial_full(f, prm, p);
      const auto red = residual_radial_reduced(f, prm, p);
      for (int i = 0; i < kEquationCount; ++i)
        CHECK(rel_diff(full.value[i], red.value[i], full.scale[i]) <= 1e-13);
    }
  }
  SUBCASE("transformed Cartesian field matches the transformed residual") {
    const auto cart = random_polynomial_field(42, 3);
    const auto polar = polar_view(cart);
    for (double r : {0.4, 0.9, 1.3})
      for (double phi : {0.0, 0.7, 2.5, -1.9}) {
        const Point pp{0.2, r, phi};
        const Point pc{0.2, r * std::cos(phi), r * std::sin(phi)};
        const auto expected = polar_normalised(residual_cartesian_iso(cart, prm, pc), r, phi);
        const auto got = residual_radial_full(polar, prm, pp);
        for (int i = 0; i < kEquationCount; ++i)
          CHECK(rel_diff(got.value[i], expected.value[i], got.scale[i]) <= 1e-11);
      }
  }
  SUBCASE("grid-backed polar residual converges at second order") {
    const auto cart = random_polynomial_field(9, 3);
    const auto polar = make([&](Values& v, const Jet& t, const Jet& r, const Jet& phi) {
      v = polar_view(cart).generator()(t, r, phi);
      for (auto& q : v) q = q * sin(r + phi);
    });
    const Point p{0.0, 1.0, 0.4};
    const auto exact = residual_radial_full(polar, prm, p);
    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
      const double h = 0.04 / (1 << level);
      GridSpec spec{p.t - h, h, 3, p.x - 4 * h, h, 9, p.y - 4 * h, h, 9};
      const GridField grid = GridField::sample(polar, spec);
      const auto approx = residual_radial_full(grid, prm, p);
      double err = 0.0;
      for (int i = 0; i < kEquationCount; ++i)
        err = std::max(err, std::abs(approx.value[i] - exact.value[i]));
      if (level > 0) {
        CHECK(prev / err > 3.5);
        CHECK(prev / err < 4.5);
      }
      prev = err;
    }
  }
  SUBCASE("origin is rejected") {
    const auto f = random_polynomial_field(3, 2);
    CHECK_THROWS_AS(residual_radial_full(f, prm, {0.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(residual_radial_reduced(f, prm, {0.0, -1.0, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("ring residuals") {
  ModelParams prm;
  SUBCASE("constant state") {
    const auto f = make([](Values& v, auto&, auto&, auto&) {
      v[kP] = 0.3;
      v[kRho] = 1.2;
      v[kTh] = 0.6;
    });
    CHECK(residual_ring(f, prm, 0.0, 0.5).max_abs() == 0.0);
    CHECK(residual_ring(f, prm, 0.0, 0.0).max_abs() == 0.0);
  }
  SUBCASE("domain checks") {
    const auto f = make([](Values&, auto&, auto&, auto&) {});
    CHECK_THROWS_AS(residual_ring(f, prm, 0.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(residual_ring(f, prm, 0.0, 2.5, RingOptions{false, 2.0}),
                    std::invalid_argument);
    CHECK_NOTHROW(residual_ring(f, prm, 0.0, 2.0, RingOptions{false, 2.0}));
  }
  SUBCASE("origin limit agrees with nearby radii") {
    const auto f = make([](Values& v, const Jet& t, const Jet& r, auto&) {
      v[kU1] = (1.0 + t * t) * (r + 0.3 * r * r * r);
      v[kP] = (1.0 + t) * r * r + 0.2 * r * r * r * r;
      v[kRho] = 1.5 + 0.1 * r * r * t;
      v[kTh] = 0.5 + 0.05 * r * r * t;
    });
    const auto at0 = residual_ring(f, prm, 0.2, 0.0);
    const auto near = residual_ring(f, prm, 0.2, 1e-6);
    for (int i = 0; i < kRingEquationCount; ++i)
      CHECK(at0.value[i] == doctest::Approx(near.value[i]).epsilon(1e-5));
  }
  SUBCASE("quasi-static switch drops inertia only") {
    const auto f = make([](Values& v, const Jet& t, const Jet& r, auto&) {
      v[kU1] = t * t * r;
      v[kRho] = 2.0 + 0.0 * r;
      v[kTh] = 0.5;
    });
    const auto full = residual_ring(f, prm, 1.0, 0.5);
    const auto qs = residual_ring(f, prm, 1.0, 0.5, RingOptions{true, 0.0});
    // varrho w_tt + w_t varrho (w_tr + w_t / r) = 2*1 + 1*2*(2 + 2)
    CHECK(full[RingEquation::momentum] - qs[RingEquation::momentum] == doctest::Approx(10.0));
    CHECK(full[RingEquation::continuity] == qs[RingEquation::continuity]);
  }
}

TEST_CASE("fluxes") {
  ModelParams prm;
  prm.k = 0.7;
  prm.D = 0.3;
  prm.sigma1 = 0.4;
  prm.S_sieve = 0.6;
  SUBCASE("zero field") {
    const auto f = make([](Values&, auto&, auto&, auto&) {});
    const auto j = fluxes(f, prm, {});
    for (const auto& v : {j.j_vf, j.j_vm, j.j_v, j.j_s}) {
      CHECK(v[0] == 0.0);
      CHECK(v[1] == 0.0);
    }
  }
  SUBCASE("pressure gradient drives fluid flux") {
    const auto f = make([](Values& v, auto&, const Jet& x, auto&) {
      v[kP] = x;
      v[kTh] = 0.5;
      v[kRho] = 1.2;
    });
    const auto j = fluxes(f, prm, {0.0, 0.3, 0.1});
    CHECK(j.j_vf[0] == doctest::Approx(-prm.k));
    CHECK(j.j_vf[1] == 0.0);
  }
  SUBCASE("concentration gradient") {
    const auto f = make([](Values& v, auto&, const Jet& x, auto&) {
      v[kC] = x;
      v[kTh] = 0.5;
      v[kRho] = 1.2;
    });
    const double x = 0.8;
    const auto j = fluxes(f, prm, {0.0, x, 0.0});
    CHECK(j.j_s[0] == doctest::Approx(-prm.D + prm.S_sieve * prm.k * prm.sigma1 * x));
  }
  SUBCASE("sum identities") {
    for (unsigned seed = 0; seed < 20; ++seed) {
      const auto f = random_polynomial_field(seed, 3);
      const Point p{0.1, 0.2, -0.1};
      const auto j = fluxes(f, prm, p);
      const double th = f.value(Var::theta_f, p), rho = f.value(Var::rho, p);
      const double rho_m = (rho - prm.rho_f0 * th) / (1.0 - th);
      for (int i = 0; i < 2; ++i) {
        const double s = std::abs(j.j_vf[i]) + std::abs(j.j_vm[i]);
        CHECK(std::abs(j.j_v[i] - j.j_vf[i] - j.j_vm[i]) <= 1e-14 * s);
        CHECK(j.j_rho[i] == doctest::Approx(prm.rho_f0 * j.j_vf[i] + rho_m * j.j_vm[i]));
      }
    }
  }
}

TEST_CASE("effective stress") {
  ModelParams prm;
  prm.lambda = 1.5;
  prm.mu = 0.5;
  prm.p_a = 0.8;
  const auto hydro = terzaghi_stress_radial(0.0, 0.0, prm.p_a, 1.3, prm);
  CHECK(hydro.tau11 == -prm.p_a);
  CHECK(hydro.tau22 == -prm.p_a);
  const double r = 1.7;
  const auto dil = terzaghi_stress_radial(r, 1.0, 0.0, r, prm);
  CHECK(dil.tau11 == doctest::Approx(2 * prm.lambda + 2 * prm.mu));
  CHECK(dil.tau22 == doctest::Approx(2 * prm.lambda + 2 * prm.mu));
  CHECK_THROWS_AS(terzaghi_stress_radial(0.0, 0.0, 0.0, 0.0, prm), std::invalid_argument);
}
