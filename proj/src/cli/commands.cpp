#include "pem/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <thread>

#include "pem/cli/output.hpp"
#include "pem/errors.hpp"
#include "pem/residuals.hpp"
#include "pem/stationary.hpp"
#include "pem/symmetry.hpp"
#include "pem/transient.hpp"

namespace pem::cli {

namespace {

StationarySolution stationary_solution(const RunConfig& c, double& r_st) {
  if (c.stationary_case == StationaryCase::neumann) {
    r_st = c.r_st > 0.0 ? c.r_st : rst_cubic(c.params).r_st;
    return neumann_solution(c.params, r_st);
  }
  r_st = c.r_st > 0.0 ? c.r_st : rst_dirichlet(c.params).r_st;
  return dirichlet_solution(c.params, r_st);
}

std::vector<double> rst_row(const RunConfig& c) {
  const ModelParams& p = c.params;
  double r_st = 0.0, residual = 0.0, count = 0.0;
  if (c.stationary_case == StationaryCase::neumann) {
    const auto rep = rst_cubic(p);
    r_st = rep.r_st;
    residual = rep.residual;
    count = static_cast<double>(rep.admissible.size());
  } else {
    const auto rep = rst_dirichlet(p);
    r_st = rep.r_st;
    residual = rep.residual;
    count = static_cast<double>(rep.roots.size());
  }
  return {p.k, p.lambda, p.mu, p.p_a, p.p_st, p.F0, p.r0, p.R0, r_st, residual, count};
}

std::vector<double> trajectory_row(const TrajectoryRecord& rec) {
  std::vector<double> row{rec.t,         rec.S,         rec.dt,
                          rec.w_boundary, rec.P_center, rec.rate_norm,
                          rec.volume_balance};
  row.insert(row.end(), rec.ring_residual.begin(), rec.ring_residual.end());
  return row;
}

void write_state(const std::filesystem::path& path, const RadialState& s) {
  CsvWriter csv(path, {"r", "w", "P", "varrho", "Theta", "w_t", "P_t", "varrho_t", "Theta_t"});
  for (int i = 0; i <= s.cells(); ++i)
    csv.row(std::vector<double>{s.r(i), s.w[i], s.P[i], s.varrho[i], s.Theta[i], s.w_t[i],
                                s.P_t[i], s.varrho_t[i], s.Theta_t[i]});
  csv.close();
}

GroupElement make_element(const std::string& name, const SymmetryOptions& o) {
  if (name == "time_translation") return GroupElement::translation(GroupKind::time_translation, o.epsilon);
  if (name == "x_translation") return GroupElement::translation(GroupKind::x_translation, o.epsilon);
  if (name == "y_translation") return GroupElement::translation(GroupKind::y_translation, o.epsilon);
  if (name == "rotation") return GroupElement::rotation(o.epsilon);
  if (name == "quarter_turn") return GroupElement::rotation(std::numbers::pi / 2.0);
  if (name == "concentration_scaling") return GroupElement::concentration_scaling(o.epsilon);
  if (name == "pressure_shift")
    return GroupElement::pressure_shift(o.epsilon, [](const Jet& t) { return sin(t) + t * t; });
  if (name == "displacement_shift") {
    const HarmonicPotentialPair pot(harmonic_polynomial(o.harmonic_degree, false),
                                    harmonic_polynomial(o.harmonic_degree, true));
    return GroupElement::displacement_shift(o.epsilon, generate_displacement_symmetry(pot));
  }
  if (name == "broken_displacement")
    return GroupElement::displacement_shift(1.0, {Polynomial2::monomial(2, 0), Polynomial2()});
  throw ConfigError("unknown symmetry element '" + name + "'");
}

std::vector<Point> symmetry_points(const RunConfig& c, double r_in, double r_out) {
  const int n = c.symmetry.points;
  std::vector<Point> pts;
  if (c.symmetry.source == SymmetrySource::stationary) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double r = r_in + (r_out - r_in) * (i + 0.5) / n;
        const double phi = 0.1 + 2.0 * std::numbers::pi * j / n;
        pts.push_back({0.3, r * std::cos(phi), r * std::sin(phi)});
      }
  } else {
    for (double t : {0.0, 0.35})
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double x = n == 1 ? 0.1 : -0.8 + 1.6 * i / (n - 1);
          const double y = n == 1 ? -0.2 : -0.7 + 1.4 * j / (n - 1);
          pts.push_back({t, x, y});
        }
  }
  return pts;
}

std::vector<double> transient_sweep_row(double value, const RunConfig& c) {
  const auto res = simulate(c.params, c.sim, c.geometry, initial_profiles(c));
  const auto rep = steady_state_check(res.final_state, c.params, c.sim.steady_tol);
  return {value,
          res.final_state.S,
          res.final_state.t,
          res.steady ? 1.0 : 0.0,
          rep.distance_w,
          rep.distance_P,
          static_cast<double>(res.accepted_steps),
          static_cast<double>(res.rejected_steps)};
}

}  // namespace

const std::vector<std::string>& rst_columns() {
  static const std::vector<std::string> c{"k",  "lambda", "mu",  "p_a",      "p_st",           "F0",
                                          "r0", "R0",     "r_st", "residual", "admissible_roots"};
  return c;
}

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> c{
      "t",        "S",         "dt",         "w_boundary",   "P_center",          "rate_norm",
      "volume_balance", "residual_continuity", "residual_momentum", "residual_density",
      "residual_porosity"};
  return c;
}

const std::vector<std::string>& symmetry_columns() {
  static const std::vector<std::string> c{"element", "equation", "pre_norm",  "post_norm",
                                          "max_diff", "max_rel",  "tolerance", "pass"};
  return c;
}

void cmd_stationary(const RunConfig& c, std::ostream& out) {
  double r_st = 0.0;
  const auto sol = stationary_solution(c, r_st);
  const ModelParams& p = c.params;
  const int M = c.samples;

  std::vector<double> rs(M), Ps(M), ws(M);
  CsvWriter csv(c.out / "profiles.csv", {"r", "P", "w", "tau11", "tau22"});
  for (int i = 0; i < M; ++i) {
    const double r = i + 1 == M ? r_st : p.r0 + (r_st - p.r0) * i / (M - 1);
    const double P = sol.pressure(r), w = sol.displacement(r);
    const auto tau = terzaghi_stress_radial(w, sol.displacement_r(r), P, r, p);
    csv.row(std::vector<double>{r, P, w, tau.tau11, tau.tau22});
    rs[i] = r;
    Ps[i] = P;
    ws[i] = w;
  }
  csv.close();
  if (c.svg)
    write_svg_chart(c.out / "profiles.svg", "stationary " + case_name(c.stationary_case) + " profiles",
                    "r", {{"P", rs, Ps}, {"w", rs, ws}});

  const auto bal = traction_balance(sol, p, r_st);
  out << "case: " << case_name(c.stationary_case) << "\n";
  out << "r_st: " << format_number(r_st) << "\n";
  out << "P0 C0 C1 Cm1: " << format_number(sol.P0) << ' ' << format_number(sol.C0) << ' '
      << format_number(sol.C1) << ' ' << format_number(sol.Cm1) << "\n";
  out << "traction residual at r_st: " << format_number(bal.residual) << " (scale "
      << format_number(bal.scale) << ")\n";
  out << "wrote " << (c.out / "profiles.csv").string() << "\n";
}

void cmd_rst(const RunConfig& c, std::ostream& out) {
  const auto row = rst_row(c);
  if (c.stationary_case == StationaryCase::neumann) {
    const auto rep = rst_cubic(c.params);
    out << "cubic: " << format_number(rep.cubic.a3) << " r^3 + " << format_number(rep.cubic.a2)
        << " r^2 + " << format_number(rep.cubic.a1) << " r + " << format_number(rep.cubic.a0)
        << "\n";
    out << "real roots:";
    for (const auto& root : rep.roots) out << ' ' << format_number(root.value);
    out << "\n";
    out << "admissible roots in (r0, R0):";
    for (double r : rep.admissible) out << ' ' << format_number(r);
    out << "\n";
    out << "bracket: cubic(r0) = " << format_number(rep.value_at_r0) << " ("
        << (rep.value_at_r0 < 0 ? "-" : rep.value_at_r0 > 0 ? "+" : "0") << "), cubic(R0) = "
        << format_number(rep.value_at_R0) << " ("
        << (rep.value_at_R0 < 0 ? "-" : rep.value_at_R0 > 0 ? "+" : "0") << ")\n";
    out << "bisection root: " << format_number(rep.bisection_root) << "\n";
  } else {
    const auto rep = rst_dirichlet(c.params);
    out << "dirichlet roots on (r0, R0]:";
    for (double r : rep.roots) out << ' ' << format_number(r);
    out << "\n";
  }
  out << "r_st: " << format_number(row[8]) << "\n";

  CsvWriter csv(c.out / "rst.csv", rst_columns());
  csv.row(row);
  csv.close();
}

void cmd_transient(const RunConfig& c, std::ostream& out) {
  SimResult res;
  try {
    res = simulate(c.params, c.sim, c.geometry, initial_profiles(c));
  } catch (const SimulationAborted& e) {
    const auto path = c.out / "diagnostic_state.csv";
    write_state(path, e.state());
    out << "aborted at t = " << format_number(e.state().t) << ": " << e.what() << "\n";
    out << "wrote " << path.string() << "\n";
    throw;
  }

  CsvWriter traj(c.out / "trajectory.csv", trajectory_columns());
  for (const auto& rec : res.trajectory) traj.row(trajectory_row(rec));
  traj.close();

  const RadialState& s = res.final_state;
  const auto exact = stationary_state(c.params, c.geometry, s.cells(), s.S);
  CsvWriter prof(c.out / "final_profile.csv", {"r", "w", "P", "varrho", "Theta", "w_stationary"});
  for (int i = 0; i <= s.cells(); ++i)
    prof.row(std::vector<double>{s.r(i), s.w[i], s.P[i], s.varrho[i], s.Theta[i], exact.w[i]});
  prof.close();

  if (!res.snapshots.empty()) {
    CsvWriter snap(c.out / "snapshots.csv", {"t", "r", "w", "P", "varrho", "Theta"});
    for (const auto& st : res.snapshots)
      for (int i = 0; i <= st.cells(); ++i)
        snap.row(std::vector<double>{st.t, st.r(i), st.w[i], st.P[i], st.varrho[i], st.Theta[i]});
    snap.close();
  }
  if (c.svg) {
    std::vector<double> ts, Ss;
    for (const auto& rec : res.trajectory) {
      ts.push_back(rec.t);
      Ss.push_back(rec.S);
    }
    write_svg_chart(c.out / "trajectory.svg", "outer radius", "t", {{"S", ts, Ss}});
  }

  const auto rep = steady_state_check(s, c.params, c.sim.steady_tol);
  out << "geometry: " << geometry_name(c.geometry)
      << ", traction form: " << traction_form_name(c.sim.traction)
      << ", quasi-static: " << (c.sim.quasi_static ? "on" : "off") << "\n";
  out << "steps: " << res.accepted_steps << " accepted, " << res.rejected_steps << " rejected\n";
  out << "t = " << format_number(s.t) << ", S = " << format_number(s.S) << "\n";
  if (res.steady && rep.is_steady) {
    out << "steady: yes (rate norm " << format_number(rep.rate_norm) << ")\n";
    out << "distance to stationary solution: w " << format_number(rep.distance_w) << ", P "
        << format_number(rep.distance_P) << "\n";
  } else {
    out << "steady: no (rate norm " << format_number(rep.rate_norm) << ")\n";
  }
  if (c.geometry == Geometry::annulus && c.sim.traction == TractionForm::annulus &&
      c.sim.load_off_time < 0.0) {
    const double r_st = rst_cubic(c.params).r_st;
    out << "r_st (cubic) = " << format_number(r_st) << ", |S - r_st| = "
        << format_number(std::abs(s.S - r_st)) << "\n";
  }
}

void cmd_symmetry(const RunConfig& c, std::ostream& out) {
  FieldPtr field;
  double r_in = c.params.r0, r_out = c.params.R0;
  if (c.symmetry.source == SymmetrySource::stationary) {
    double r_st = 0.0;
    const auto sol = stationary_solution(c, r_st);
    r_out = r_st;
    const double rho = c.initial_varrho.value_or(c.params.rho_f0);
    const double theta = c.initial_theta.value_or(0.5);
    field = std::make_shared<ClosedFormField>(stationary_cartesian_field(
        sol, [rho](const Jet&) { return Jet(rho); }, [theta](const Jet&) { return Jet(theta); }));
  } else {
    field = std::make_shared<ClosedFormField>(
        random_polynomial_field(c.symmetry.seed, c.symmetry.poly_degree));
  }
  const auto pts = symmetry_points(c, r_in, r_out);
  InvarianceOptions opt;
  opt.tolerance = c.symmetry.tolerance;

  CsvWriter csv(c.out / "symmetry.csv", symmetry_columns());
  int failed = 0;
  out << "source: " << symmetry_source_name(c.symmetry.source) << ", " << pts.size()
      << " points\n";
  for (const auto& name : c.symmetry.elements) {
    const auto rep = check_invariance(make_element(name, c.symmetry), field, c.params, pts, opt);
    for (const auto& row : rep.rows) {
      csv.row(std::vector<std::string>{
          name, std::string(equation_name(row.equation)), format_number(row.pre_norm),
          format_number(row.post_norm), format_number(row.max_diff),
          format_number(row.max_relative), format_number(row.tolerance), row.pass ? "1" : "0"});
    }
    const bool pass = rep.pass();
    failed += pass ? 0 : 1;
    out << name << ": " << (pass ? "pass" : "FAIL") << "\n";
  }
  csv.close();
  out << failed << " of " << c.symmetry.elements.size() << " elements failed\n";
}

unsigned sweep_threads(std::size_t points) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PEM_SIM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1)
      throw ConfigError("PEM_SIM_THREADS must be a positive integer");
    n = std::min(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, points)));
}

void cmd_sweep(const RunConfig& c, std::ostream& out) {
  if (c.sweep.values.empty()) throw ConfigError("sweep_values is empty");
  const std::size_t n = c.sweep.values.size();

  std::vector<RunConfig> points(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    apply_setting(points[i], c.sweep.param, format_number(c.sweep.values[i]));
    validate(points[i]);
  }

  std::vector<std::vector<double>> rows(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = c.sweep.target == SweepTarget::rst
                      ? rst_row(points[i])
                      : transient_sweep_row(c.sweep.values[i], points[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = sweep_threads(n);
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  const bool rst = c.sweep.target == SweepTarget::rst;
  const auto path = c.out / (rst ? "rst.csv" : "sweep.csv");
  std::vector<std::string> header;
  if (rst) {
    header = rst_columns();
  } else {
    header = {c.sweep.param, "S_final", "t_final", "steady", "distance_w", "distance_P",
              "accepted_steps", "rejected_steps"};
  }
  CsvWriter csv(path, header);
  for (const auto& row : rows) csv.row(row);
  csv.close();

  out << "sweep over " << c.sweep.param << " (" << n << " points, " << threads
      << " threads, target " << sweep_target_name(c.sweep.target) << ")\n";
  for (std::size_t i = 0; i < n; ++i)
    out << "  " << format_number(c.sweep.values[i]) << " -> "
        << format_number(rst ? rows[i][8] : rows[i][1]) << "\n";
  out << "wrote " << path.string() << "\n";
}

}  // namespace pem::cli
