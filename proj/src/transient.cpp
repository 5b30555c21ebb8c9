#include "pem/transient.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>

#include "pem/stationary.hpp"

namespace pem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSecantIterations = 40;
constexpr int kResidualSamples = 16;

// Weights of the m-th derivative at x of the polynomial through nodes xs.
std::array<double, 3> lagrange_weights(const std::array<double, 3>& xs, int count, double x,
                                       int m) {
  std::array<double, 3> w{};
  for (int j = 0; j < count; ++j) {
    double denom = 1.0;
    for (int k = 0; k < count; ++k)
      if (k != j) denom *= xs[j] - xs[k];
    // Basis numerator prod_{k != j} (x - x_k) and its derivatives.
    double value = 1.0, d1 = 0.0, d2 = 0.0;
    for (int k = 0; k < count; ++k) {
      if (k == j) continue;
      const double f = x - xs[k];
      d2 = d2 * f + 2.0 * d1;
      d1 = d1 * f + value;
      value *= f;
    }
    w[j] = (m == 0 ? value : m == 1 ? d1 : d2) / denom;
  }
  return w;
}

// Derivative of order m (0..2) of nodal data f at node i, second-order on
// any node spacing (one-sided stencils at the ends).
double nodal_derivative(const std::vector<double>& r, const std::vector<double>& f, int i, int m) {
  if (m == 0) return f[i];
  const int n = static_cast<int>(f.size());
  if (m == 1) {
    const int a = std::clamp(i - 1, 0, n - 3);
    const std::array<double, 3> xs{r[a], r[a + 1], r[a + 2]};
    const auto w = lagrange_weights(xs, 3, r[i], 1);
    return w[0] * f[a] + w[1] * f[a + 1] + w[2] * f[a + 2];
  }
  if (i > 0 && i < n - 1) {
    const std::array<double, 3> xs{r[i - 1], r[i], r[i + 1]};
    const auto w = lagrange_weights(xs, 3, r[i], 2);
    return w[0] * f[i - 1] + w[1] * f[i] + w[2] * f[i + 1];
  }
  // Uniform four-point one-sided second derivative at the ends.
  const double h = r[1] - r[0];
  if (i == 0) return (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
  return (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / (h * h);
}

std::vector<double> radii(const RadialState& s) {
  std::vector<double> r(s.xi.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = s.r(static_cast<int>(i));
  return r;
}

// Linear interpolation of nodal data on a uniform grid, extrapolating
// linearly beyond either end.
double interpolate(double r_in, double h, const std::vector<double>& f, double r) {
  const int n = static_cast<int>(f.size());
  const double s = (r - r_in) / h;
  const int j = std::clamp(static_cast<int>(std::floor(s)), 0, n - 2);
  const double th = s - j;
  return (1.0 - th) * f[j] + th * f[j + 1];
}

std::vector<double> resample(const RadialState& from, const std::vector<double>& f,
                             const std::vector<double>& r_to) {
  std::vector<double> out(r_to.size());
  for (std::size_t i = 0; i < r_to.size(); ++i) out[i] = interpolate(from.r_in, from.h(), f, r_to[i]);
  return out;
}

// Dilatation w_r + w / r at the nodes (2 w_r at r = 0).
std::vector<double> dilatation(const std::vector<double>& r, const std::vector<double>& w) {
  std::vector<double> e(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double wr = nodal_derivative(r, w, static_cast<int>(i), 1);
    e[i] = r[i] > 0.0 ? wr + w[i] / r[i] : 2.0 * wr;
  }
  return e;
}

using Triplets = std::vector<Eigen::Triplet<double>>;

// Linear form sum(coef * x[index]) + constant.
struct Lin {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  void add(int index, double coef) { terms.emplace_back(index, coef); }
  void add(const Lin& other, double scale) {
    for (const auto& [i, c] : other.terms) terms.emplace_back(i, c * scale);
    constant += other.constant * scale;
  }
};

// Unknown layout: nodal displacements, then cell-centred pressures.
int W(int i) { return i; }

struct Trial {
  double S = 0.0;
  std::vector<double> w, P;
  double g = 0.0;
  double g_scale = 0.0;
};

struct TractionValue {
  double residual;
  double scale;
};

TractionValue traction_value(const std::vector<double>& w, double r_in, double S,
                             const ModelParams& p, double load, TractionForm form) {
  const int N = static_cast<int>(w.size()) - 1;
  const double h = (S - r_in) / N;
  const double w_r = (3.0 * w[N] - 4.0 * w[N - 1] + w[N - 2]) / (2.0 * h);
  const double a = lame_star(p) * w_r;
  const double b = p.lambda * w[N] / S;
  const double target = form == TractionForm::annulus ? -load / (2.0 * kPi * S) : p.p_a - load;
  return {a + b - target, std::abs(a) + std::abs(b) + std::abs(target)};
}

// One implicit step from `old` to t_new at trial boundary positions.
class Stepper {
 public:
  int Pc(int j) const { return N_ + 1 + j; }

  Stepper(const ModelParams& p, const SimConfig& c, const RadialState& old, double dt, double load)
      : p_(p), c_(c), old_(old), dt_(dt), load_(load), N_(old.cells()) {
    r_old_ = radii(old_);
  }

  Trial solve(double S) const {
    const int N = N_;
    const double r_in = old_.r_in;
    const double h = (S - r_in) / N;
    std::vector<double> r(N + 1), rdot(N + 1);
    for (int i = 0; i <= N; ++i) {
      r[i] = r_in + (S - r_in) * old_.xi[i];
      rdot[i] = (r[i] - r_old_[i]) / dt_;
    }
    const bool annulus = old_.geometry == Geometry::annulus;

    // w_t at fixed r as a linear form in the new w.
    const auto velocity = [&](int i) {
      Lin v;
      v.add(W(i), 1.0 / dt_);
      v.constant = -old_.w[i] / dt_;
      if (rdot[i] != 0.0) {
        if (i < N) {
          v.add(W(i + 1), -rdot[i] / (2.0 * h));
          v.add(W(i - 1), rdot[i] / (2.0 * h));
        } else {
          v.add(W(N), -rdot[i] * 3.0 / (2.0 * h));
          v.add(W(N - 1), rdot[i] * 4.0 / (2.0 * h));
          v.add(W(N - 2), -rdot[i] / (2.0 * h));
        }
      }
      return v;
    };
    // P_r at node i from the cell-centred pressures; the ambient value is
    // imposed on the boundary faces.
    const auto pressure_gradient = [&](int i) {
      Lin g;
      if (i == 0) {
        g.add(Pc(0), 2.0 / h);
        g.constant = -2.0 * p_.p_a / h;
      } else if (i == N) {
        g.add(Pc(N - 1), -2.0 / h);
        g.constant = 2.0 * p_.p_a / h;
      } else {
        g.add(Pc(i), 1.0 / h);
        g.add(Pc(i - 1), -1.0 / h);
      }
      return g;
    };
    // Radial flux r (w_t - (k/2) P_r) through node i.
    const auto flux = [&](int i) {
      Lin q;
      if (i == 0 && !annulus) return q;
      q.add(velocity(i), r[i]);
      q.add(pressure_gradient(i), -0.5 * p_.k * r[i]);
      return q;
    };

    std::vector<double> rho_hat, v_hat, rho_t_hat;
    if (!c_.quasi_static) {
      rho_hat = resample(old_, old_.varrho, r);
      rho_t_hat = resample(old_, old_.varrho_t, r);
      v_hat = resample(old_, old_.w_t, r);
    }

    const int unknowns = 2 * N + 1;
    Triplets trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
    const auto put = [&](int row, const Lin& form) {
      for (const auto& [i, c] : form.terms) trip.emplace_back(row, i, c);
      rhs[row] -= form.constant;
    };

    const double ls = lame_star(p_);
    for (int j = 0; j < N; ++j) {
      Lin cont;
      cont.add(flux(j + 1), 1.0);
      cont.add(flux(j), -1.0);
      Lin row;
      row.add(cont, 1.0 / (h * 0.5 * (r[j] + r[j + 1])));
      put(Pc(j), row);
    }
    trip.emplace_back(W(0), W(0), 1.0);
    for (int i = 1; i < N; ++i) {
      Lin mom;
      mom.add(W(i + 1), ls * (1.0 / (h * h) + 1.0 / (2.0 * h * r[i])));
      mom.add(W(i), ls * (-2.0 / (h * h) - 1.0 / (r[i] * r[i])));
      mom.add(W(i - 1), ls * (1.0 / (h * h) - 1.0 / (2.0 * h * r[i])));
      mom.add(pressure_gradient(i), -1.0);
      if (!c_.quasi_static) {
        // Quadratic velocity terms linearised about the previous velocity.
        const double rv = rho_hat[i] * v_hat[i];
        mom.add(velocity(i), -rho_hat[i] / dt_ - rv / r[i]);
        mom.add(velocity(i + 1), -rv / (2.0 * h));
        mom.add(velocity(i - 1), rv / (2.0 * h));
        mom.constant += rho_hat[i] * v_hat[i] / dt_ - v_hat[i] * rho_t_hat[i];
      }
      put(W(i), mom);
    }
    trip.emplace_back(W(N), W(N), 1.0);
    rhs[W(N)] = S - p_.R0;

    Eigen::SparseMatrix<double> A(unknowns, unknowns);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverError("singular step matrix", 0, 0.0);
    const Eigen::VectorXd x = lu.solve(rhs);

    Trial out;
    out.S = S;
    out.w.resize(N + 1);
    out.P.resize(N + 1);
    for (int i = 0; i <= N; ++i) out.w[i] = x[W(i)];
    out.w[0] = 0.0;
    out.w[N] = S - p_.R0;
    for (int i = 1; i < N; ++i) out.P[i] = 0.5 * (x[Pc(i - 1)] + x[Pc(i)]);
    out.P[N] = p_.p_a;
    // Even extension at the disc centre: P = a + b r^2 through the first two cells.
    out.P[0] = annulus ? p_.p_a : x[Pc(0)] - (x[Pc(1)] - x[Pc(0)]) / 8.0;
    const auto tv = traction_value(out.w, r_in, S, p_, load_, c_.traction);
    out.g = tv.residual;
    out.g_scale = tv.scale;
    return out;
  }

  double tolerance(const Trial& t) const { return 1e-12 * t.g_scale + 1e-15 * lame_star(p_); }

  // Boundary position satisfying the traction condition.
  Trial solve_boundary() const {
    const double lower = old_.r_in + 1e-9 * (old_.S - old_.r_in);
    const double span = old_.S - old_.r_in;
    int evaluations = 0;
    const auto eval = [&](double S) {
      ++evaluations;
      return solve(std::max(S, lower));
    };

    Trial a = eval(old_.S);
    if (!std::isfinite(a.g)) throw SolverError("non-finite traction residual", evaluations, a.g);
    if (std::abs(a.g) <= tolerance(a)) return a;
    Trial b = eval(old_.S - 1e-3 * span * (a.g > 0.0 ? 1.0 : -1.0));
    for (int it = 0; it < kSecantIterations; ++it) {
      if (!std::isfinite(b.g)) break;
      if (std::abs(b.g) <= tolerance(b)) return b;
      if (b.g == a.g) break;
      double next = b.S - b.g * (b.S - a.S) / (b.g - a.g);
      if (!std::isfinite(next)) break;
      next = std::clamp(next, lower, old_.S + 2.0 * span);
      if (std::abs(next - b.S) <= 1e-15 * std::abs(b.S)) {
        return b;
      }
      a = std::move(b);
      b = eval(next);
    }

    // Bracketed fallback.
    double step = 1e-3 * span;
    double x1 = old_.S, g1 = eval(old_.S).g, x2 = x1, g2 = g1;
    bool found = false;
    for (int k = 0; k < 60 && !found; ++k) {
      for (double dir : {-1.0, 1.0}) {
        const double x = std::max(lower, old_.S + dir * step);
        const double g = eval(x).g;
        if (std::isfinite(g) && (g < 0.0) != (g1 < 0.0)) {
          x2 = x;
          g2 = g;
          found = true;
          break;
        }
      }
      step *= 2.0;
    }
    if (!found) throw SolverError("no bracket for the boundary position", evaluations, g1);
    std::uintmax_t iters = 200;
    const auto tol = [](double u, double v) {
      return std::abs(u - v) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                    std::max(std::abs(u), std::abs(v));
    };
    const auto [u, v] = boost::math::tools::toms748_solve(
        [&](double S) { return eval(S).g; }, std::min(x1, x2), std::max(x1, x2),
        x1 < x2 ? g1 : g2, x1 < x2 ? g2 : g1, tol, iters);
    Trial best = eval(0.5 * (u + v));
    if (!(std::abs(best.g) <= 1e-8 * best.g_scale + 1e-12 * lame_star(p_)))
      throw SolverError("boundary position did not converge", evaluations, best.g);
    return best;
  }

  // Transport of a profile with relative velocity a, then exact relaxation
  // f -> target with the integrated rate `exponent`.
  std::vector<double> transport(const std::vector<double>& f_old, const std::vector<double>& a,
                                double h, const std::vector<double>& exponent, double target,
                                std::optional<double> inner_value, double outer_inflow) const {
    const int N = N_;
    Triplets trip;
    Eigen::VectorXd rhs(N + 1);
    for (int i = 0; i <= N; ++i) {
      rhs[i] = f_old[i];
      if (i == 0 && inner_value) {
        trip.emplace_back(0, 0, 1.0);
        rhs[0] = *inner_value;
        continue;
      }
      if (i == N && a[N] < 0.0) {
        trip.emplace_back(N, N, 1.0);
        rhs[N] = outer_inflow;
        continue;
      }
      const double c = dt_ * a[i] / h;
      if (a[i] > 0.0 && i > 0) {
        trip.emplace_back(i, i, 1.0 + c);
        trip.emplace_back(i, i - 1, -c);
      } else if (a[i] < 0.0 && i < N) {
        trip.emplace_back(i, i, 1.0 - c);
        trip.emplace_back(i, i + 1, c);
      } else {
        trip.emplace_back(i, i, 1.0);
      }
    }
    Eigen::SparseMatrix<double> A(N + 1, N + 1);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverError("singular transport matrix", 0, 0.0);
    const Eigen::VectorXd star = lu.solve(rhs);
    std::vector<double> out(N + 1);
    for (int i = 0; i <= N; ++i) {
      if (i == 0 && inner_value) {
        out[i] = *inner_value;
        continue;
      }
      if (i == N && a[N] < 0.0) {
        out[i] = outer_inflow;
        continue;
      }
      out[i] = target + (star[i] - target) * std::exp(-exponent[i]);
    }
    return out;
  }

  RadialState advance(const Trial& trial, const InitialProfiles& initial) const {
    RadialState s;
    s.geometry = old_.geometry;
    s.r_in = old_.r_in;
    s.xi = old_.xi;
    s.t = old_.t + dt_;
    s.S = trial.S;
    s.dSdt = (trial.S - old_.S) / dt_;
    s.w = trial.w;
    s.P = trial.P;
    const auto r = radii(s);
    s.w_t = ale_time_derivative(s.w, old_.w, r, r_old_, dt_);
    s.P_t = ale_time_derivative(s.P, old_.P, r, r_old_, dt_);
    // Over one step the continuity equation integrates k Lap P dt at fixed r
    // to twice the dilatation change.
    const auto e_new = dilatation(r, s.w);
    const auto e_old = resample(old_, dilatation(r_old_, old_.w), r);
    std::vector<double> exponent(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) exponent[i] = 2.0 * (e_new[i] - e_old[i]);
    std::vector<double> a(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) a[i] = s.w_t[i] - (r[i] - r_old_[i]) / dt_;
    const bool annulus = s.geometry == Geometry::annulus;
    const double h = s.h();
    // Material entering through r = S carries the fixed-r solution of the
    // relaxation equations from the initial state: f - target decays by
    // exp(-2 e).
    const double decay_in = std::exp(-2.0 * e_new.back());
    const double S_new = s.S;
    const double varrho_in = p_.rho_f0 + (initial.varrho(S_new) - p_.rho_f0) * decay_in;
    const double theta_in = 1.0 - (1.0 - initial.theta(S_new)) * decay_in;
    s.varrho = transport(old_.varrho, a, h, exponent, p_.rho_f0,
                         annulus ? std::optional<double>(initial.varrho(s.r_in)) : std::nullopt,
                         varrho_in);
    s.Theta = transport(old_.Theta, a, h, exponent, 1.0,
                        annulus ? std::optional<double>(initial.theta(s.r_in)) : std::nullopt,
                        theta_in);
    s.varrho_t = ale_time_derivative(s.varrho, old_.varrho, r, r_old_, dt_);
    s.Theta_t = ale_time_derivative(s.Theta, old_.Theta, r, r_old_, dt_);
    return s;
  }

 private:
  const ModelParams& p_;
  const SimConfig& c_;
  const RadialState& old_;
  double dt_;
  double load_;
  int N_;
  std::vector<double> r_old_;
};

std::string bounds_violation(const RadialState& s) {
  for (std::size_t i = 0; i < s.xi.size(); ++i) {
    const double vals[] = {s.w[i], s.P[i], s.varrho[i], s.Theta[i]};
    for (double v : vals)
      if (!std::isfinite(v)) return "non-finite value at node " + std::to_string(i);
    if (!(s.Theta[i] > 0.0 && s.Theta[i] < 1.0))
      return "porosity left (0, 1) at node " + std::to_string(i);
    if (!(s.varrho[i] > 0.0)) return "density became non-positive at node " + std::to_string(i);
  }
  if (!std::isfinite(s.S)) return "non-finite boundary position";
  return {};
}

double center_pressure(const RadialState& s) {
  return s.geometry == Geometry::circle ? s.P.front() : s.P[s.P.size() / 2];
}

std::array<double, kRingEquationCount> window_residual(const std::vector<RadialState>& window,
                                                       const ModelParams& p, bool quasi_static) {
  std::array<double, kRingEquationCount> out{};
  const RadialWindowField field(window);
  const RadialState& s = window.back();
  const int N = s.cells();
  for (int j = 1; j <= kResidualSamples; ++j) {
    const int i = N * j / (kResidualSamples + 1);
    const auto res = residual_ring(field, p, s.t, s.r(i), RingOptions{quasi_static, 0.0});
    for (int e = 0; e < kRingEquationCount; ++e)
      out[e] = std::max(out[e], std::abs(res.value[e]));
  }
  return out;
}

TrajectoryRecord make_record(const RadialState& s, const ModelParams& p, double dt) {
  TrajectoryRecord rec;
  rec.t = s.t;
  rec.S = s.S;
  rec.dt = dt;
  rec.w_boundary = s.w.back();
  rec.P_center = center_pressure(s);
  rec.rate_norm = s.rate_norm();
  rec.volume_balance = volume_balance(s, p).defect();
  rec.ring_residual = s.ring_residual;
  return rec;
}

}  // namespace

std::string geometry_name(Geometry g) { return g == Geometry::circle ? "circle" : "annulus"; }

std::string traction_form_name(TractionForm f) {
  return f == TractionForm::ring ? "ring" : "annulus";
}

double RadialState::rate_norm() const {
  double m = std::abs(dSdt);
  for (const auto* v : {&w_t, &P_t, &varrho_t, &Theta_t})
    for (double x : *v) m = std::max(m, std::abs(x));
  return m;
}

void SimConfig::validate() const {
  std::vector<std::string> v;
  if (N < 16) v.push_back("N must be >= 16");
  if (!(dt > 0.0)) v.push_back("dt must be > 0");
  if (!(dt_max >= dt)) v.push_back("dt_max must be >= dt");
  if (!(dt_min > 0.0 && dt_min <= dt)) v.push_back("dt_min must lie in (0, dt]");
  if (!(dt_growth >= 1.0)) v.push_back("dt_growth must be >= 1");
  if (!(t_end > 0.0)) v.push_back("t_end must be > 0");
  if (!(steady_tol > 0.0)) v.push_back("steady_tol must be > 0");
  if (!(load_ramp >= 0.0)) v.push_back("load_ramp must be >= 0");
  if (!std::isfinite(load_off_time)) v.push_back("load_off_time must be finite");
  if (!(output_interval >= 0.0)) v.push_back("output_interval must be >= 0");
  if (max_steps < 1) v.push_back("max_steps must be >= 1");
  if (!v.empty()) throw ParameterError(std::move(v));
}

InitialProfiles InitialProfiles::resolved(const ModelParams& params) const {
  InitialProfiles out = *this;
  if (!out.varrho) {
    const double v = params.rho_f0 * (1.0 + 1e-7);
    out.varrho = [v](double) { return v; };
  }
  if (!out.theta) out.theta = [](double) { return 1.0 - 1e-7; };
  return out;
}

double load_at(const ModelParams& p, const SimConfig& c, double t) {
  if (c.load_off_time >= 0.0 && t > c.load_off_time) return 0.0;
  if (c.load_ramp > 0.0) return p.F0 * std::min(1.0, t / c.load_ramp);
  return p.F0;
}

RadialState initial_state(const ModelParams& params, const SimConfig& config, Geometry geometry,
                          const InitialProfiles& profiles) {
  const ModelParams p = validate_params(params);
  config.validate();
  const InitialProfiles initial = profiles.resolved(p);
  RadialState s;
  s.geometry = geometry;
  s.r_in = geometry == Geometry::annulus ? p.r0 : 0.0;
  s.S = p.R0;
  const int N = config.N;
  s.xi.resize(N + 1);
  for (int i = 0; i <= N; ++i) s.xi[i] = static_cast<double>(i) / N;
  s.w.assign(N + 1, 0.0);
  s.P.assign(N + 1, p.p_a);
  s.varrho.resize(N + 1);
  s.Theta.resize(N + 1);
  std::vector<std::string> bad;
  for (int i = 0; i <= N; ++i) {
    const double r = s.r(i);
    s.varrho[i] = initial.varrho(r);
    s.Theta[i] = initial.theta(r);
    if (!(s.varrho[i] > 0.0) && bad.size() < 1) bad.push_back("initial density must be > 0");
    if (!(s.Theta[i] > 0.0 && s.Theta[i] < 1.0) && bad.size() < 2)
      bad.push_back("initial porosity must lie in (0, 1)");
  }
  if (!bad.empty()) throw ParameterError(std::move(bad));
  s.w_t.assign(N + 1, 0.0);
  s.P_t.assign(N + 1, 0.0);
  s.varrho_t.assign(N + 1, 0.0);
  s.Theta_t.assign(N + 1, 0.0);
  return s;
}

double traction_residual(const RadialState& state, const ModelParams& params, double load,
                         TractionForm form) {
  return traction_value(state.w, state.r_in, state.S, params, load, form).residual;
}

SimResult simulate(const ModelParams& params, const SimConfig& config, Geometry geometry,
                   const InitialProfiles& profiles) {
  const ModelParams p = validate_params(params);
  const InitialProfiles initial = profiles.resolved(p);
  RadialState state = initial_state(p, config, geometry, initial);

  SimResult result;
  result.trajectory.push_back(make_record(state, p, 0.0));
  std::vector<RadialState> window{state};
  double dt = config.dt;
  double next_output = config.output_interval > 0.0 ? config.output_interval : config.t_end;
  if (config.output_interval > 0.0) result.snapshots.push_back(state);

  const auto breakpoint_after = [&](double t) {
    double b = std::min(config.t_end, next_output);
    if (config.load_ramp > 0.0 && t < config.load_ramp) b = std::min(b, config.load_ramp);
    if (config.load_off_time >= 0.0 && t < config.load_off_time)
      b = std::min(b, config.load_off_time);
    return b;
  };
  const auto load_settled = [&](double t) {
    if (config.load_ramp > 0.0 && t < config.load_ramp) return false;
    if (config.load_off_time >= 0.0 && t <= config.load_off_time) return false;
    return true;
  };

  const double t_eps = 1e-12 * config.t_end;
  while (state.t < config.t_end - t_eps && result.accepted_steps < config.max_steps) {
    const double b = breakpoint_after(state.t);
    double step = std::min(dt, b - state.t);
    if (b - (state.t + step) < t_eps) step = b - state.t;

    RadialState next;
    std::string failure;
    int iterations = 0;
    double last_residual = 0.0;
    try {
      const double load = load_at(p, config, state.t + step);
      const Stepper stepper(p, config, state, step, load);
      const Trial trial = stepper.solve_boundary();
      next = stepper.advance(trial, initial);
      failure = bounds_violation(next);
    } catch (const SolverError& e) {
      failure = e.what();
      iterations = e.iterations();
      last_residual = e.last_residual();
      next = state;
    }
    if (!failure.empty()) {
      ++result.rejected_steps;
      dt = 0.5 * step;
      if (dt < config.dt_min)
        throw SimulationAborted("simulation aborted at t = " + std::to_string(state.t) + ": " +
                                    failure,
                                iterations, last_residual, next);
      continue;
    }

    window.push_back(next);
    if (window.size() > 3) window.erase(window.begin());
    if (window.size() == 3)
      window.back().ring_residual = window_residual(window, p, config.quasi_static);
    state = window.back();
    ++result.accepted_steps;
    result.trajectory.push_back(make_record(state, p, step));
    if (config.output_interval > 0.0 && state.t >= next_output - t_eps) {
      result.snapshots.push_back(state);
      next_output += config.output_interval;
    }
    dt = std::min(config.dt_max, step * config.dt_growth);
    if (config.stop_at_steady && load_settled(state.t) && state.rate_norm() < config.steady_tol) {
      result.steady = true;
      break;
    }
  }
  if (!result.steady) result.steady = state.rate_norm() < config.steady_tol;
  if (config.output_interval > 0.0 &&
      (result.snapshots.empty() || result.snapshots.back().t != state.t))
    result.snapshots.push_back(state);
  result.final_state = std::move(state);
  return result;
}

RadialState stationary_state(const ModelParams& params, Geometry geometry, int N, double S,
                             const InitialProfiles& given) {
  const InitialProfiles profiles = given.resolved(params);
  if (N < 16) throw std::invalid_argument("N must be >= 16");
  RadialState s;
  s.geometry = geometry;
  s.r_in = geometry == Geometry::annulus ? params.r0 : 0.0;
  if (!(S > s.r_in)) throw std::invalid_argument("S must exceed the inner radius");
  s.S = S;
  s.xi.resize(N + 1);
  for (int i = 0; i <= N; ++i) s.xi[i] = static_cast<double>(i) / N;
  s.w.resize(N + 1);
  s.P.assign(N + 1, params.p_a);
  s.varrho.resize(N + 1);
  s.Theta.resize(N + 1);
  ModelParams q = params;
  q.p_st = params.p_a;
  const bool annulus = geometry == Geometry::annulus;
  const double slope = (S - params.R0) / S;
  for (int i = 0; i <= N; ++i) {
    const double r = s.r(i);
    s.w[i] = annulus ? neumann_solution(q, S).displacement(r) : slope * r;
    s.varrho[i] = profiles.varrho(r);
    s.Theta[i] = profiles.theta(r);
  }
  if (annulus) s.w.front() = 0.0;
  s.w.back() = S - params.R0;
  s.w_t.assign(N + 1, 0.0);
  s.P_t.assign(N + 1, 0.0);
  s.varrho_t.assign(N + 1, 0.0);
  s.Theta_t.assign(N + 1, 0.0);
  return s;
}

SteadyReport steady_state_check(const RadialState& state, const ModelParams& params,
                                double steady_tol) {
  SteadyReport rep;
  rep.rate_norm = state.rate_norm();
  rep.is_steady = rep.rate_norm < steady_tol;
  if (!rep.is_steady) return rep;
  const RadialState exact =
      stationary_state(params, state.geometry, state.cells(), state.S);
  for (std::size_t i = 0; i < state.w.size(); ++i) {
    rep.distance_w = std::max(rep.distance_w, std::abs(state.w[i] - exact.w[i]));
    rep.distance_P = std::max(rep.distance_P, std::abs(state.P[i] - params.p_a));
  }
  return rep;
}

std::vector<double> ale_time_derivative(const std::vector<double>& now,
                                        const std::vector<double>& before,
                                        const std::vector<double>& r_now,
                                        const std::vector<double>& r_before, double dt) {
  if (now.size() != before.size() || now.size() != r_now.size() ||
      now.size() != r_before.size() || now.size() < 3)
    throw std::invalid_argument("ale_time_derivative: mismatched profiles");
  if (!(dt > 0.0)) throw std::invalid_argument("ale_time_derivative: dt must be > 0");
  std::vector<double> out(now.size());
  for (std::size_t i = 0; i < now.size(); ++i) {
    const double rdot = (r_now[i] - r_before[i]) / dt;
    out[i] = (now[i] - before[i]) / dt;
    if (rdot != 0.0) out[i] -= rdot * nodal_derivative(r_now, now, static_cast<int>(i), 1);
  }
  return out;
}

VolumeBalance volume_balance(const RadialState& s, const ModelParams& p) {
  const auto r = radii(s);
  const int N = s.cells();
  const double outer_flux = s.S * nodal_derivative(r, s.P, N, 1);
  const double inner_flux = s.r_in * nodal_derivative(r, s.P, 0, 1);
  return {s.S * s.w_t[N] - s.r_in * s.w_t[0], 0.5 * p.k * (outer_flux - inner_flux)};
}

RadialWindowField::RadialWindowField(std::vector<RadialState> states)
    : states_(std::move(states)) {
  if (states_.empty() || states_.size() > 3)
    throw std::invalid_argument("RadialWindowField: needs 1 to 3 states");
  std::sort(states_.begin(), states_.end(),
            [](const RadialState& a, const RadialState& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < states_.size(); ++i)
    if (!(states_[i].t > states_[i - 1].t))
      throw std::invalid_argument("RadialWindowField: state times must differ");
  for (const auto& s : states_) radii_.push_back(radii(s));
}

double RadialWindowField::spatial(int level, Var v, double r, int order) const {
  const RadialState& s = states_[level];
  const auto& rr = radii_[level];
  const std::vector<double>* f = nullptr;
  switch (v) {
    case Var::u1: f = &s.w; break;
    case Var::p: f = &s.P; break;
    case Var::rho: f = &s.varrho; break;
    case Var::theta_f: f = &s.Theta; break;
    default: return 0.0;
  }
  const double h = s.h();
  const int n = s.cells() + 1;
  const double pos = (r - s.r_in) / h;
  const int j = std::clamp(static_cast<int>(std::floor(pos)), 0, n - 2);
  const double th = pos - j;
  return (1.0 - th) * nodal_derivative(rr, *f, j, order) +
         th * nodal_derivative(rr, *f, j + 1, order);
}

double RadialWindowField::value(Var v, const Point& at, const DerivIndex& d) const {
  if (d.y > 0) return 0.0;
  if (v == Var::u2 || v == Var::c) return 0.0;
  const int count = static_cast<int>(states_.size());
  if (d.t >= count)
    throw DerivativeUnavailable("RadialWindowField: not enough time levels");
  std::array<double, 3> ts{};
  for (int k = 0; k < count; ++k) ts[k] = states_[k].t;
  const auto w = lagrange_weights(ts, count, at.t, d.t);
  double sum = 0.0;
  for (int k = 0; k < count; ++k) sum += w[k] * spatial(k, v, at.x, d.x);
  return sum;
}

}  // namespace pem
