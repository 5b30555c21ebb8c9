#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pem/cubic.hpp"
#include "pem/errors.hpp"
#include "pem/residuals.hpp"
#include "pem/stationary.hpp"

using namespace pem;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams unit_annulus(double F0 = 0.0) {
  ModelParams p;
  p.lambda = 1;
  p.mu = 1;
  p.r0 = 1;
  p.R0 = 2;
  p.F0 = F0;
  return p;
}

// Plain sign-change bisection, independent of the library root finder.
double bisection_oracle(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

const RadialProfile kVarrho = [](const Jet& r) { return 1.5 + 0.1 * sin(r); };
const RadialProfile kTheta = [](const Jet& r) { return 0.4 + 0.05 * r * r; };

}  // namespace

TEST_CASE("cubic real roots") {
  SUBCASE("three simple roots") {
    const Cubic c{2.0, -2.0 * 6.0, 2.0 * 11.0, -2.0 * 6.0};  // 2 (r-1)(r-2)(r-3)
    const auto r = real_roots(c);
    REQUIRE(r.size() == 3);
    CHECK(r[0].value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r[1].value == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r[2].value == doctest::Approx(3.0).epsilon(1e-15));
    for (const auto& x : r) CHECK(x.multiplicity == 1);
  }
  SUBCASE("double root") {
    const Cubic c{1.0, -4.0, 5.0, -2.0};  // (r-1)^2 (r-2)
    const auto r = real_roots(c);
    REQUIRE(r.size() == 2);
    CHECK(r[0].value == doctest::Approx(1.0));
    CHECK(r[0].multiplicity == 2);
    CHECK(r[1].value == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("triple root") {
    const Cubic c{1.0, -3.0, 3.0, -1.0};
    const auto r = real_roots(c);
    REQUIRE(r.size() == 1);
    CHECK(r[0].value == 1.0);
    CHECK(r[0].multiplicity == 3);
  }
  SUBCASE("one real root with complex critical points") {
    const Cubic c{2.0, 0.0, 1.0, -6.0};
    const auto crit = critical_points(c);
    CHECK(crit[0].imag() != 0.0);
    const auto r = real_roots(c);
    REQUIRE(r.size() == 1);
    CHECK(std::abs(c(r[0].value)) <= 1e-14 * c.scale(r[0].value));
  }
  SUBCASE("invalid input") {
    CHECK_THROWS_AS(real_roots(Cubic{0.0, 1.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(real_roots(Cubic{1.0, NAN, 1.0, 1.0}), std::invalid_argument);
  }
  SUBCASE("random cubics against their factors") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 500; ++i) {
      double z[3] = {u(rng), u(rng), u(rng)};
      std::sort(z, z + 3);
      if (z[1] - z[0] < 1e-3 || z[2] - z[1] < 1e-3) continue;
      const double a = 0.5 + std::abs(u(rng));
      const Cubic c{a, -a * (z[0] + z[1] + z[2]), a * (z[0] * z[1] + z[0] * z[2] + z[1] * z[2]),
                    -a * z[0] * z[1] * z[2]};
      const auto r = real_roots(c);
      REQUIRE(r.size() == 3);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(r[k].value - z[k]) <= 1e-9 * (1 + std::abs(z[k])));
    }
  }
}

TEST_CASE("Neumann solution") {
  SUBCASE("unloaded radius gives no displacement") {
    const auto s = neumann_solution(unit_annulus(), 2.0);
    for (double r : {1.0, 1.3, 2.0}) CHECK(s.displacement(r) == 0.0);
  }
  SUBCASE("fixed inner radius and prescribed outer displacement") {
    const ModelParams p = unit_annulus();
    const auto s = neumann_solution(p, 1.5);
    CHECK(s.C0 == 0.0);
    CHECK(s.pressure(1.2) == p.p_st);
    CHECK(std::abs(s.displacement(p.r0)) <= 1e-15);
    CHECK(s.displacement(1.5) == doctest::Approx(-0.5).epsilon(1e-15));
    for (double rst : {1.01, 1.2, 1.9, 3.0}) CHECK(std::abs(neumann_solution(p, rst).displacement(1.0)) <= 1e-15);
  }
  SUBCASE("invalid radii") {
    const ModelParams p = unit_annulus();
    CHECK_THROWS_WITH_AS(neumann_solution(p, 1.0), doctest::Contains("degenerates"),
                         std::invalid_argument);
    CHECK_THROWS_AS(neumann_solution(p, 0.5), std::invalid_argument);
  }
}

TEST_CASE("Dirichlet solution") {
  SUBCASE("equal pressures keep the pressure at ambient") {
    ModelParams p = unit_annulus();
    p.p_a = 0.3;
    p.p_st = 0.3;
    const auto s = dirichlet_solution(p, 1.7);
    CHECK(s.C0 == 0.0);
    CHECK(s.pressure(1.4) == doctest::Approx(0.3));
  }
  SUBCASE("undeformed state") {
    ModelParams p = unit_annulus();
    const auto s = dirichlet_solution(p, p.R0);
    for (double r : {1.0, 1.5, 2.0}) {
      CHECK(s.displacement(r) == doctest::Approx(0.0));
      CHECK(s.pressure(r) == doctest::Approx(p.p_a));
    }
  }
  SUBCASE("boundary values for a generic case") {
    ModelParams p = unit_annulus();
    p.p_a = 0.0;
    p.p_st = 1.0;
    const double rst = 1.5;
    const auto s = dirichlet_solution(p, rst);
    CHECK(std::abs(s.pressure(p.r0) - p.p_a) <= 1e-12);
    CHECK(std::abs(s.pressure(rst) - p.p_st) <= 1e-12);
    CHECK(std::abs(s.displacement(p.r0)) <= 1e-12);
    CHECK(std::abs(s.displacement(rst) - (rst - p.R0)) <= 1e-12);
  }
  SUBCASE("inner radius away from one") {
    ModelParams p = unit_annulus();
    p.r0 = 0.4;
    p.R0 = 1.7;
    p.p_a = -0.2;
    p.p_st = 0.9;
    const double rst = 1.1;
    const auto s = dirichlet_solution(p, rst);
    CHECK(std::abs(s.pressure(p.r0) - p.p_a) <= 1e-12);
    CHECK(std::abs(s.pressure(rst) - p.p_st) <= 1e-12);
    CHECK(std::abs(s.displacement(p.r0)) <= 1e-12);
    CHECK(std::abs(s.displacement(rst) - (rst - p.R0)) <= 1e-12);
  }
  SUBCASE("derivative evaluators agree with jets") {
    ModelParams p = unit_annulus();
    p.p_st = 2.0;
    const auto s = dirichlet_solution(p, 1.4);
    const Jet r = Jet::variable(1.23, 1);
    const Jet w = s.displacement(r);
    CHECK(w.derivative({0, 1, 0}) == doctest::Approx(s.displacement_r(1.23)));
    CHECK(w.derivative({0, 2, 0}) == doctest::Approx(s.displacement_rr(1.23)));
    CHECK(s.pressure(r).derivative({0, 1, 0}) == doctest::Approx(s.pressure_r(1.23)));
  }
  CHECK_THROWS_AS(dirichlet_solution(unit_annulus(), 1.0), std::invalid_argument);
}

TEST_CASE("stationary solutions solve the ring system") {
  ModelParams p = unit_annulus(16 * kPi);
  p.p_a = 0.1;
  p.p_st = 0.6;
  p.k = 0.7;
  const double rst = rst_cubic(p).r_st;
  for (const auto& s : {neumann_solution(p, rst), dirichlet_solution(p, rst)}) {
    const auto f = stationary_ring_field(s, kVarrho, kTheta);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double r = p.r0 + (rst - p.r0) * (i + 0.5) / 1000.0;
      const auto res = residual_ring(f, p, 0.0, r);
      for (int e = 0; e < kRingEquationCount; ++e)
        worst = std::max(worst, std::abs(res.value[e]) / std::max(res.scale[e], 1.0));
    }
    CHECK(worst <= 1e-11);
    // The Cartesian embedding solves the full isotropic system as well.
    const auto cart = stationary_cartesian_field(s, kVarrho, kTheta);
    for (double phi : {0.0, 1.0, 2.2}) {
      const double r = 0.5 * (p.r0 + rst);
      const auto res = residual_cartesian_iso(cart, p, {0.0, r * std::cos(phi), r * std::sin(phi)});
      for (int e = 0; e < kEquationCount; ++e)
        CHECK(std::abs(res.value[e]) <= 1e-11 * std::max(res.scale[e], 1.0));
    }
  }
}

TEST_CASE("grid-backed ring residual of a stationary solution converges at second order") {
  ModelParams p = unit_annulus();
  p.p_st = 1.0;
  const auto s = dirichlet_solution(p, 1.5);
  const auto f = stationary_ring_field(s, kVarrho, kTheta);
  const auto err_at = [&](double h) {
    const GridSpec spec{-h, h, 3, 1.0, h, static_cast<int>(std::lround(0.5 / h)) + 1, 0.0, 1.0, 1};
    const GridField g = GridField::sample(f, spec);
    double worst = 0.0;
    for (double r : {1.1, 1.25, 1.4})
      worst = std::max(worst, residual_ring(g, p, 0.0, r).max_abs());
    return worst;
  };
  const double e1 = err_at(0.05), e2 = err_at(0.025);
  CHECK(e1 / e2 >= 3.5);
  CHECK(e1 / e2 <= 4.5);
}

TEST_CASE("steady-radius cubic") {
  SUBCASE("zero load returns the initial radius exactly") {
    const auto rep = rst_cubic(unit_annulus(0.0));
    CHECK(rep.r_st == 2.0);
  }
  SUBCASE("reference load") {
    const ModelParams p = unit_annulus(16 * kPi);
    const auto rep = rst_cubic(p);
    CHECK(rep.cubic.a3 == 2.0);
    CHECK(std::abs(rep.cubic.a2) <= 1e-15);
    CHECK(rep.cubic.a1 == 1.0);
    CHECK(rep.cubic.a0 == doctest::Approx(-6.0).epsilon(1e-15));
    const double oracle =
        bisection_oracle([](double r) { return 2 * r * r * r + r - 6; }, 1.0, 2.0);
    CHECK(std::abs(rep.r_st - oracle) <= 1e-10);
    CHECK(rep.r_st == doctest::Approx(1.326956285678968).epsilon(1e-14));
    CHECK(rep.bracket_ok);
    CHECK(rep.value_at_r0 == doctest::Approx(-3.0));
    CHECK(rep.value_at_R0 == doctest::Approx(4.0 * 3.0));
    CHECK(rep.residual <= 1e-10);
    CHECK(std::abs(rep.bisection_root - rep.r_st) <= 1e-12);
  }
  SUBCASE("random loads above the threshold have a unique admissible root") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 5.0), extra(0.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
      ModelParams p;
      p.lambda = u(rng);
      p.mu = u(rng);
      p.r0 = u(rng);
      p.R0 = p.r0 * (1.05 + u(rng));
      p.F0 = 4 * kPi * (p.lambda + p.mu) * p.R0 * (1.0 + extra(rng));
      const auto rep = rst_cubic(p);
      CHECK(rep.admissible.size() == 1);
      CHECK(rep.bracket_ok);
      const auto c = rep.cubic;
      const double oracle = bisection_oracle([&](double r) { return c(r); }, p.r0, p.R0);
      CHECK(std::abs(rep.r_st - oracle) <= 1e-10 * p.R0);
      CHECK(std::max(rep.critical[0].real(), rep.critical[1].real()) < 0.0);
      const auto s = neumann_solution(p, rep.r_st);
      const auto bal = traction_balance(s, p, rep.r_st);
      CHECK(std::abs(bal.residual) <= 1e-10 * bal.scale);
    }
  }
  SUBCASE("small loads pick the root closest to the initial radius") {
    ModelParams p = unit_annulus();
    for (double f : {0.01, 0.5, 3.0}) {
      p.F0 = f;
      const auto rep = rst_cubic(p);
      CHECK(rep.r_st == rep.admissible.back());
      CHECK(rep.r_st < p.R0);
      CHECK(rep.r_st > p.R0 - 0.5);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(rst_cubic(unit_annulus(-1.0)), std::invalid_argument);
  }
}

TEST_CASE("Dirichlet steady radius") {
  SUBCASE("unloaded, equal pressures") {
    const auto rep = rst_dirichlet(unit_annulus(0.0));
    CHECK(rep.r_st == 2.0);
  }
  SUBCASE("equal pressures reproduce the cubic root") {
    for (double f : {4.0, 16 * kPi, 80.0}) {
      ModelParams p = unit_annulus(f);
      p.p_a = p.p_st = 0.25;
      CHECK(std::abs(rst_dirichlet(p).r_st - rst_cubic(p).r_st) <= 1e-8);
    }
  }
  SUBCASE("generic pressures") {
    ModelParams p = unit_annulus(16 * kPi);
    p.p_a = 0.0;
    p.p_st = 2.0;
    const auto rep = rst_dirichlet(p);
    CHECK(rep.residual <= 1e-10);
    CHECK(rep.r_st > p.r0);
    CHECK(rep.r_st <= p.R0);
    for (double r : rep.roots) {
      const auto b = dirichlet_condition(p, r);
      CHECK(std::abs(b.residual) <= 1e-10 * b.scale);
    }
  }
}
