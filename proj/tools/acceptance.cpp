// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pem/errors.hpp"
#include "pem/residuals.hpp"
#include "pem/stationary.hpp"
#include "pem/symmetry.hpp"
#include "pem/transient.hpp"

#ifndef PEM_SIM_PATH
#error "PEM_SIM_PATH must name the pem_sim executable"
#endif

using namespace pem;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

ModelParams unit_annulus(double F0) {
  ModelParams p;
  p.lambda = 1.0;
  p.mu = 1.0;
  p.r0 = 1.0;
  p.R0 = 2.0;
  p.F0 = F0;
  return p;
}

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

std::vector<Point> space_time_samples() {
  std::vector<Point> pts;
  for (double t : {0.0, 0.35})
    for (double x : {-0.6, 0.1, 0.5})
      for (double y : {-0.4, 0.3}) pts.push_back({t, x, y});
  return pts;
}

std::vector<Point> annulus_samples(double r_in, double r_out) {
  std::vector<Point> pts;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j) {
      const double r = r_in + (r_out - r_in) * (i + 0.5) / 4.0;
      const double phi = 0.2 + 2.0 * kPi * j / 5.0;
      pts.push_back({0.3, r * std::cos(phi), r * std::sin(phi)});
    }
  return pts;
}

Outcome criterion1() {
  Outcome o;
  const ModelParams p = unit_annulus(0.0);
  rst_cubic(p);
  const auto start = Clock::now();
  const auto rep = rst_cubic(p);
  const double elapsed = seconds_since(start);
  o.require(rep.r_st == p.R0, "r_st = " + num(rep.r_st));
  o.require(elapsed < 1e-3, "runtime " + num(elapsed) + " s");
  o.detail = o.pass ? "r_st == R0, " + num(elapsed) + " s" : o.detail;
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto start = Clock::now();
  const ModelParams p = unit_annulus(16.0 * kPi);
  const auto rep = rst_cubic(p);
  const auto& c = rep.cubic;
  o.require(std::abs(c.a3 - 2.0) <= 1e-14 && std::abs(c.a2) <= 1e-13 &&
                std::abs(c.a1 - 1.0) <= 1e-14 && std::abs(c.a0 + 6.0) <= 1e-13,
            "cubic is not 2r^3 + r - 6");
  const double oracle =
      bisection_oracle([](double r) { return 2.0 * r * r * r + r - 6.0; }, 1.0, 2.0);
  o.require(std::abs(rep.r_st - oracle) <= 1e-10, "root differs from bisection oracle");
  o.require(rep.r_st > 1.0 && rep.r_st < 2.0, "root outside (1, 2)");

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> modulus(0.1, 10.0), radius(0.1, 2.0), ratio(1.05, 5.0),
      excess(1.0, 4.0);
  int single = 0;
  for (int i = 0; i < 1000; ++i) {
    ModelParams q;
    q.lambda = modulus(rng);
    q.mu = modulus(rng);
    q.r0 = radius(rng);
    q.R0 = q.r0 * ratio(rng);
    q.F0 = 4.0 * kPi * (q.lambda + q.mu) * q.R0 * excess(rng);
    const auto r = rst_cubic(q);
    single += r.admissible.size() == 1 ? 1 : 0;
  }
  o.require(single == 1000, std::to_string(1000 - single) + " draws without a unique root");
  const double elapsed = seconds_since(start);
  o.require(elapsed < 1.0, "runtime " + num(elapsed) + " s");
  if (o.pass)
    o.detail = "r_st = " + num(rep.r_st) + ", |r_st - bisection| = " +
               num(std::abs(rep.r_st - oracle)) + ", 1000/1000 unique, " + num(elapsed) + " s";
  return o;
}

Outcome criterion3() {
  Outcome o;
  ModelParams p = unit_annulus(16.0 * kPi);
  p.p_a = 0.1;
  p.p_st = 0.6;
  p.k = 0.7;
  const double rst = rst_cubic(p).r_st;
  double worst = 0.0;
  for (const auto& s : {neumann_solution(p, rst), dirichlet_solution(p, rst)}) {
    const auto f = stationary_ring_field(s, kVarrho, kTheta);
    for (int i = 0; i < 1000; ++i) {
      const double r = p.r0 + (rst - p.r0) * (i + 0.5) / 1000.0;
      const auto res = residual_ring(f, p, 0.0, r);
      for (int e = 0; e < kRingEquationCount; ++e)
        worst = std::max(worst, std::abs(res.value[e]) / std::max(res.scale[e], 1.0));
    }
  }
  o.require(worst <= 1e-11, "analytic residual " + num(worst));

  std::string ratios;
  for (const auto& s : {neumann_solution(p, rst), dirichlet_solution(p, rst)}) {
    const auto f = stationary_ring_field(s, kVarrho, kTheta);
    const auto err_at = [&](double h) {
      const int nr = static_cast<int>(std::lround((rst - p.r0) / h)) + 1;
      const GridSpec spec{-h, h, 3, p.r0, h, nr, 0.0, 1.0, 1};
      const GridField g = GridField::sample(f, spec);
      double e = 0.0;
      for (double frac : {0.25, 0.5, 0.75}) {
        const double r = p.r0 + std::round(frac * (nr - 1)) * h;
        e = std::max(e, residual_ring(g, p, 0.0, r).max_abs());
      }
      return e;
    };
    const double h = (rst - p.r0) / 16.0;
    const double ratio = err_at(h) / err_at(h / 2.0);
    o.require(ratio >= 3.5 && ratio <= 4.5, "grid ratio " + num(ratio));
    ratios += (ratios.empty() ? "" : ", ") + num(ratio);
  }
  if (o.pass) o.detail = "max analytic residual " + num(worst) + ", grid ratios " + ratios;
  return o;
}

Outcome criterion4() {
  Outcome o;
  const ModelParams p = unit_annulus(16.0 * kPi);
  const double rst = rst_cubic(p).r_st;
  const auto bal = traction_balance(neumann_solution(p, rst), p, rst);
  const double rel = std::abs(bal.residual) / bal.scale;
  o.require(rel <= 1e-10, "relative traction residual " + num(rel));
  if (o.pass) o.detail = "relative traction residual " + num(rel);
  return o;
}

Outcome criterion5() {
  Outcome o;
  const ModelParams p = unit_annulus(16.0 * kPi);
  const double rst = rst_cubic(p).r_st;
  const auto run = [&](int N) {
    SimConfig c;
    c.N = N;
    c.quasi_static = true;
    return simulate(p, c, Geometry::annulus);
  };
  const auto start = Clock::now();
  const auto r200 = run(200);
  const double elapsed = seconds_since(start);
  const auto rep = steady_state_check(r200.final_state, p, SimConfig{}.steady_tol);
  o.require(r200.steady && rep.is_steady, "N = 200 run did not reach steady state");
  const double gap = std::abs(r200.final_state.S - rst);
  o.require(gap <= 0.01 * (p.R0 - rst), "|S - r_st| = " + num(gap));
  o.require(elapsed < 60.0, "runtime " + num(elapsed) + " s");

  const double s100 = run(100).final_state.S;
  const double s400 = run(400).final_state.S;
  const double ratio = (s400 - r200.final_state.S) / (r200.final_state.S - s100);
  o.require(ratio > 0.2 && ratio < 0.3, "refinement ratio " + num(ratio));
  if (o.pass)
    o.detail = "|S - r_st| = " + num(gap) + " (band " + num(0.01 * (p.R0 - rst)) +
               "), refinement ratio " + num(ratio) + ", N = 200 in " + num(elapsed) + " s";
  return o;
}

Outcome criterion6() {
  Outcome o;
  ModelParams p;
  p.lambda = 1.4;
  p.mu = 0.6;
  p.k = 0.8;
  p.D = 0.5;
  p.sigma1 = 0.3;
  p.S_sieve = 0.4;
  p.F0 = 8.0 * kPi;

  std::vector<DisplacementPair> shifts;
  for (int n = 1; n <= 6; ++n)
    shifts.push_back(
        generate_displacement_symmetry({harmonic_polynomial(n, false), harmonic_polynomial(n, true)}));
  const DisplacementPair broken{Polynomial2::monomial(2, 0), Polynomial2()};
  const double eps = 0.7;

  const auto suite = [&](const FieldPtr& field, const std::vector<Point>& pts,
                         const std::string& name) {
    const auto pr = check_invariance(
        GroupElement::pressure_shift(1.3, [](const Jet& t) { return sin(t) + t * t; }), field, p,
        pts);
    o.require(pr.pass(), name + ": pressure shift");
    for (std::size_t k = 0; k < shifts.size(); ++k)
      o.require(check_invariance(GroupElement::displacement_shift(eps, shifts[k]), field, p, pts)
                    .pass(),
                name + ": displacement shift degree " + std::to_string(k + 1));
    const auto sc = check_invariance(GroupElement::concentration_scaling(eps), field, p, pts);
    o.require(sc.pass(), name + ": concentration scaling");
    const auto qt = check_invariance(GroupElement::rotation(kPi / 2.0), field, p, pts);
    o.require(qt.pass(), name + ": quarter turn");
    const auto neg = check_invariance(GroupElement::displacement_shift(1.0, broken), field, p, pts);
    const auto& m1 = neg.rows[static_cast<int>(Equation::momentum1)];
    o.require(!neg.pass() && !m1.pass, name + ": negative control passed");
    o.require(std::abs(m1.max_diff - 2.0 * lame_star(p)) <= 1e-10 * lame_star(p),
              name + ": negative control residual " + num(m1.max_diff));
  };

  const double rst = rst_cubic(p).r_st;
  const auto stat = std::make_shared<ClosedFormField>(
      stationary_cartesian_field(neumann_solution(p, rst), kVarrho, kTheta));
  suite(stat, annulus_samples(p.r0, rst), "stationary");
  for (unsigned long long seed = 1; seed <= 20; ++seed)
    suite(std::make_shared<ClosedFormField>(random_polynomial_field(seed, 4)),
          space_time_samples(), "polynomial seed " + std::to_string(seed));

  // Grid fields: quarter turns exact at mapped nodes, displacement shift O(h^2).
  const auto exact = random_polynomial_field(13, 4);
  const GridSpec spec = GridSpec::square(8, 0.05, 0.2, 0.05);
  const auto grid = std::make_shared<GridField>(GridField::sample(exact, spec));
  std::vector<Point> nodes;
  for (int ix = 0; ix < spec.nx; ix += 2)
    for (int iy = 0; iy < spec.ny; iy += 3) nodes.push_back(grid->node(1, ix, iy));
  for (int q = 1; q < 4; ++q)
    o.require(check_invariance(GroupElement::rotation(q * kPi / 2.0), grid, p, nodes).pass(),
              "grid quarter turn " + std::to_string(q));
  const auto diff_at = [&](double h, const DisplacementPair& g) {
    const GridSpec s = GridSpec::square(4, h, 0.2, h);
    const auto gf = std::make_shared<GridField>(GridField::sample(exact, s));
    const std::vector<Point> centre{gf->node(1, 4, 4), gf->node(1, 5, 3)};
    const auto rep = check_invariance(GroupElement::displacement_shift(1.0, g), gf, p, centre);
    double m = 0.0;
    for (const auto& row : rep.rows) m = std::max(m, row.max_diff);
    return m;
  };
  const double ratio = diff_at(0.04, shifts[4]) / diff_at(0.02, shifts[4]);
  o.require(ratio > 3.5 && ratio < 4.5, "grid displacement-shift ratio " + num(ratio));
  if (o.pass)
    o.detail = "stationary + 20 polynomial fields, 11 elements each; grid quarter turns exact, "
               "displacement-shift grid ratio " + num(ratio);
  return o;
}

Outcome criterion7() {
  Outcome o;
  ModelParams p;
  p.lambda = 1.4;
  p.mu = 0.6;
  p.k = 0.8;
  p.D = 0.5;
  p.sigma1 = 0.3;
  p.S_sieve = 0.4;
  const auto iso = AnisotropicModuli::isotropic(p.lambda, p.mu);
  const auto pts = space_time_samples();
  double worst = 0.0;
  for (unsigned long long seed = 100; seed < 200; ++seed) {
    const auto f = random_polynomial_field(seed, 3);
    for (const auto& at : pts) {
      const auto a = residual_cartesian_aniso(f, iso, p, at);
      const auto b = residual_cartesian_iso(f, p, at);
      for (int e = 0; e < kEquationCount; ++e)
        worst = std::max(worst, std::abs(a.value[e] - b.value[e]) /
                                    std::max({b.scale[e], a.scale[e], 1e-300}));
    }
  }
  o.require(worst <= 1e-12, "aniso vs iso relative difference " + num(worst));

  const AnisotropicModuli m{3.0, 2.0, 0.7, 0.9, 0.3, 0.2};
  InvarianceOptions opt;
  opt.moduli = m;
  const auto basis = elastic_kernel_basis(m, 5);
  int checks = 0;
  for (unsigned long long seed = 21; seed <= 25; ++seed) {
    const auto field = std::make_shared<ClosedFormField>(random_polynomial_field(seed, 3));
    std::vector<GroupElement> elements{
        GroupElement::translation(GroupKind::time_translation, 0.3),
        GroupElement::translation(GroupKind::x_translation, -0.2),
        GroupElement::translation(GroupKind::y_translation, 0.5),
        GroupElement::concentration_scaling(-0.4),
        GroupElement::pressure_shift(2.0, [](const Jet& t) { return t * t; })};
    for (const auto& g : basis) elements.push_back(GroupElement::displacement_shift(1.3, g));
    for (const auto& e : elements) {
      o.require(check_invariance(e, field, p, pts, opt).pass(), "anisotropic " + e.label());
      ++checks;
    }
  }
  if (o.pass)
    o.detail = "max relative difference " + num(worst) + " over 100 fields; " +
               std::to_string(checks) + " anisotropic invariance checks pass";
  return o;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_sim(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string("\"") + PEM_SIM_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

Outcome criterion8() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / ("pem_acceptance_" + std::to_string(getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path cfg = root / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# acceptance determinism run\n"
         "F0 = 16*pi\nN = 100\noutput_interval = 0.1\nsvg = on\n"
         "source = polynomial\nseed = 7\n"
         "sweep_param = F0\nsweep_values = 0, 8*pi, 16*pi, 24*pi\n";
  }
  const std::vector<std::pair<std::string, std::string>> runs{
      {"stationary", "stationary"},
      {"stationary_dirichlet", "stationary --case dirichlet --p_st 1"},
      {"rst", "rst"},
      {"transient", "transient"},
      {"symmetry", "symmetry"},
      {"sweep_rst", "sweep"},
      {"sweep_transient", "sweep --sweep_target transient --N 48 --sweep_values 4pi,8pi,16pi"}};
  int files = 0;
  for (const auto& [name, args] : runs) {
    std::vector<fs::path> dirs{root / (name + "_a"), root / (name + "_b")};
    bool ran = true;
    for (const auto& dir : dirs) {
      const int code = run_sim(args + " --config \"" + cfg.string() + "\" --out \"" +
                                   dir.string() + "\"",
                               root / (name + ".log"));
      if (code != 0) {
        o.require(false, name + " exited with " + std::to_string(code));
        ran = false;
      }
    }
    if (!ran) continue;
    std::vector<fs::path> csvs;
    for (const auto& e : fs::directory_iterator(dirs[0]))
      if (e.path().extension() == ".csv" || e.path().extension() == ".svg")
        csvs.push_back(e.path().filename());
    std::sort(csvs.begin(), csvs.end());
    o.require(!csvs.empty(), name + " wrote no files");
    for (const auto& file : csvs) {
      const std::string a = read_file(dirs[0] / file), b = read_file(dirs[1] / file);
      o.require(!a.empty() && a == b, name + "/" + file.string() + " differs");
      ++files;
    }
  }
  fs::remove_all(root);
  if (o.pass) o.detail = std::to_string(files) + " output files byte-identical across 7 runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"zero-load identity", criterion1},
      {"cubic oracle", criterion2},
      {"stationary residual oracle", criterion3},
      {"boundary closure", criterion4},
      {"transient-to-stationary convergence", criterion5},
      {"symmetry suite", criterion6},
      {"anisotropic consistency", criterion7},
      {"determinism", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
