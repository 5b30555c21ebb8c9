#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pem/stationary.hpp"
#include "pem/transient.hpp"

using namespace pem;

namespace {

ModelParams loaded_annulus() {
  ModelParams p;
  p.F0 = 16.0 * std::numbers::pi;
  return p;
}

SimResult run(const ModelParams& p, int N, Geometry g = Geometry::annulus,
              SimConfig c = SimConfig{}) {
  c.N = N;
  return simulate(p, c, g);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("config validation lists every violation") {
  SimConfig c;
  c.N = 8;
  c.dt = -1.0;
  c.steady_tol = 0.0;
  try {
    c.validate();
    FAIL("expected ParameterError");
  } catch (const ParameterError& e) {
    CHECK(e.violations().size() >= 3);
  }
  CHECK_NOTHROW(SimConfig{}.validate());
}

TEST_CASE("load schedule") {
  ModelParams p;
  p.F0 = 2.0;
  SimConfig c;
  CHECK(load_at(p, c, 0.0) == 2.0);
  c.load_ramp = 4.0;
  CHECK(load_at(p, c, 1.0) == doctest::Approx(0.5));
  CHECK(load_at(p, c, 5.0) == 2.0);
  c.load_off_time = 6.0;
  CHECK(load_at(p, c, 6.0) == 2.0);
  CHECK(load_at(p, c, 6.5) == 0.0);
}

TEST_CASE("unloaded body stays undeformed") {
  ModelParams p;
  SimConfig c;
  c.stop_at_steady = false;
  c.t_end = 1.0;
  c.output_interval = 0.25;
  for (Geometry g : {Geometry::annulus, Geometry::circle}) {
    const auto r = run(p, 32, g, c);
    CHECK(r.final_state.t == doctest::Approx(1.0));
    for (const auto& rec : r.trajectory) CHECK(std::abs(rec.S - p.R0) <= 1e-10);
    for (const auto& s : r.snapshots) {
      CHECK(max_abs(s.w) <= 1e-10);
      CHECK(std::abs(s.S - p.R0) <= 1e-10);
    }
  }
}

TEST_CASE("loaded annulus shrinks monotonically to the cubic root") {
  const ModelParams p = loaded_annulus();
  const double r_st = rst_cubic(p).r_st;
  const auto r = run(p, 200);
  REQUIRE(r.steady);
  const auto rep = steady_state_check(r.final_state, p, SimConfig{}.steady_tol);
  CHECK(rep.is_steady);
  CHECK(std::abs(r.final_state.S - r_st) <= 0.01 * (p.R0 - r_st));
  for (std::size_t k = 1; k < r.trajectory.size(); ++k)
    CHECK(r.trajectory[k].S <= r.trajectory[k - 1].S + 1e-12);
  CHECK(std::abs(r.final_state.w.back() - (r.final_state.S - p.R0)) <= 1e-12);
  CHECK(std::abs(traction_residual(r.final_state, p, p.F0, TractionForm::annulus)) <= 1e-10);
}

TEST_CASE("grid refinement is second order") {
  const ModelParams p = loaded_annulus();
  const double s100 = run(p, 100).final_state.S;
  const double s200 = run(p, 200).final_state.S;
  const double s400 = run(p, 400).final_state.S;
  const double ratio = (s400 - s200) / (s200 - s100);
  CHECK(ratio > 0.2);
  CHECK(ratio < 0.3);

  const double d100 = steady_state_check(run(p, 100).final_state, p, 1e-10).distance_w;
  const double d200 = steady_state_check(run(p, 200).final_state, p, 1e-10).distance_w;
  CHECK(d200 < d100);
  CHECK(d200 / d100 == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("porosity and density stay in bounds for accepted steps") {
  const ModelParams p = loaded_annulus();
  SimConfig c;
  c.output_interval = 0.01;
  const auto r = run(p, 200, Geometry::annulus, c);
  REQUIRE(r.snapshots.size() > 10);
  for (const auto& s : r.snapshots) {
    for (std::size_t i = 0; i < s.Theta.size(); ++i) {
      CHECK(s.Theta[i] > 0.0);
      CHECK(s.Theta[i] < 1.0);
      CHECK(s.varrho[i] > 0.0);
    }
  }
}

TEST_CASE("porosity leaving its bounds aborts with the offending state") {
  const ModelParams p = loaded_annulus();
  SimConfig c;
  c.N = 64;
  InitialProfiles init;
  init.theta = [](double) { return 0.5; };
  try {
    simulate(p, c, Geometry::annulus, init);
    FAIL("expected SimulationAborted");
  } catch (const SimulationAborted& e) {
    const auto& th = e.state().Theta;
    bool outside = false;
    for (double x : th) outside = outside || !(x > 0.0 && x < 1.0);
    CHECK(outside);
  }
}

TEST_CASE("invalid initial profiles are rejected") {
  SimConfig c;
  InitialProfiles init;
  init.varrho = [](double) { return -1.0; };
  CHECK_THROWS_AS(initial_state(ModelParams{}, c, Geometry::annulus, init), ParameterError);
}

TEST_CASE("steady state check") {
  const ModelParams p = loaded_annulus();
  const double r_st = rst_cubic(p).r_st;
  const auto s = stationary_state(p, Geometry::annulus, 64, r_st);
  const auto rep = steady_state_check(s, p, 1e-10);
  CHECK(rep.is_steady);
  CHECK(rep.distance_w <= 1e-14);
  CHECK(rep.distance_P == 0.0);

  SimConfig c;
  c.N = 64;
  c.t_end = 0.01;
  const auto early = simulate(p, c, Geometry::annulus);
  CHECK_FALSE(early.steady);
  CHECK_FALSE(steady_state_check(early.final_state, p, c.steady_tol).is_steady);
}

TEST_CASE("disc converges to the linear displacement limit") {
  ModelParams p;
  p.F0 = 4.0 * std::numbers::pi;
  const auto r = run(p, 64, Geometry::circle);
  REQUIRE(r.steady);
  // 2 (lambda + mu) (S - R0) = -F0 / (2 pi)
  CHECK(r.final_state.S == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(r.final_state.w.front() == 0.0);
}

TEST_CASE("ring traction form") {
  ModelParams p;
  p.F0 = 1.0;
  SimConfig c;
  c.traction = TractionForm::ring;
  const auto r = run(p, 64, Geometry::circle, c);
  REQUIRE(r.steady);
  const double A = (p.p_a - p.F0) / (2.0 * (p.lambda + p.mu));
  CHECK(r.final_state.S == doctest::Approx(p.R0 / (1.0 - A)).epsilon(1e-9));
}

TEST_CASE("quasi-static and inertial runs share the steady state") {
  const ModelParams p = loaded_annulus();
  SimConfig c;
  c.load_ramp = 1.0;
  const auto qs = run(p, 100, Geometry::annulus, c);
  c.quasi_static = false;
  const auto full = run(p, 100, Geometry::annulus, c);
  REQUIRE(qs.steady);
  REQUIRE(full.steady);
  CHECK(std::abs(qs.final_state.S - full.final_state.S) <= 2.0 * c.steady_tol);
}

TEST_CASE("boundary condition holds at load release") {
  const ModelParams p = loaded_annulus();
  SimConfig c;
  c.N = 64;
  c.load_off_time = 0.5;
  c.output_interval = 0.5;
  c.t_end = 3.0;
  const auto r = run(p, 64, Geometry::annulus, c);
  bool seen = false;
  for (const auto& s : r.snapshots) {
    if (std::abs(s.t - 0.5) < 1e-12) {
      seen = true;
      CHECK(std::abs(s.w.back() - (s.S - p.R0)) <= 1e-12);
    }
  }
  CHECK(seen);
  double s_release = 0.0;
  for (const auto& rec : r.trajectory)
    if (std::abs(rec.t - 0.5) < 1e-12) s_release = rec.S;
  CHECK(r.final_state.S > s_release);
}

TEST_CASE("volume balance defect is second order once the initial layer is resolved") {
  const ModelParams p = loaded_annulus();
  const auto worst = [&](int N) {
    double m = 0.0;
    for (const auto& rec : run(p, N).trajectory)
      if (rec.t >= 0.2) m = std::max(m, std::abs(rec.volume_balance));
    return m;
  };
  const double coarse = worst(50);
  const double fine = worst(100);
  CHECK(fine < 1e-5);
  CHECK(fine / coarse == doctest::Approx(0.25).epsilon(0.15));
}

TEST_CASE("moving-grid time derivative of a static profile") {
  const auto defect = [](int N) {
    const double dt = 1e-9;
    std::vector<double> r0(N + 1), r1(N + 1), f0(N + 1), f1(N + 1);
    for (int i = 0; i <= N; ++i) {
      const double xi = static_cast<double>(i) / N;
      r0[i] = 1.0 + xi;
      r1[i] = 1.0 + (1.0 - dt) * xi;
      f0[i] = std::sin(3.0 * r0[i]);
      f1[i] = std::sin(3.0 * r1[i]);
    }
    return max_abs(ale_time_derivative(f1, f0, r1, r0, dt));
  };
  const double a = defect(40), b = defect(80);
  CHECK(a < 1e-2);
  CHECK(b / a == doctest::Approx(0.25).epsilon(0.1));
  CHECK_THROWS_AS(ale_time_derivative({1.0}, {1.0, 2.0}, {1.0}, {1.0}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("window field over steady states") {
  const ModelParams p = loaded_annulus();
  const double r_st = rst_cubic(p).r_st;
  auto a = stationary_state(p, Geometry::annulus, 128, r_st);
  auto b = a, c = a;
  b.t = 0.1;
  c.t = 0.2;
  const RadialWindowField field({a, b, c});
  const double r = a.r(40);
  CHECK(field.value(Var::u1, {0.2, r, 0.0}) == doctest::Approx(a.w[40]).epsilon(1e-14));
  CHECK(std::abs(field.value(Var::u1, {0.2, r, 0.0}, {1, 0, 0})) <= 1e-12);
  CHECK(field.value(Var::c, {0.2, r, 0.0}) == 0.0);
  const auto res = residual_ring(field, p, 0.2, r, RingOptions{true, 0.0});
  for (int e = 0; e < kRingEquationCount; ++e) CHECK(std::abs(res.value[e]) <= 1e-3 * (res.scale[e] + 1.0));

  const RadialWindowField two({a, b});
  CHECK_THROWS_AS(two.value(Var::u1, {0.1, r, 0.0}, {2, 0, 0}), DerivativeUnavailable);
}
