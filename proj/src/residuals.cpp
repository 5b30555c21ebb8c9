#include "pem/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pem {

namespace {

// Accumulates one equation as lhs - rhs together with the term magnitudes.
class Balance {
 public:
  void lhs(double term) {
    value_ += term;
    scale_ += std::abs(term);
  }
  void rhs(double term) {
    value_ -= term;
    scale_ += std::abs(term);
  }
  double value() const { return value_; }
  double scale() const { return scale_; }

 private:
  double value_ = 0.0;
  double scale_ = 0.0;
};

// Derivative reader bound to a source and a point.
struct Reader {
  const FieldSource& f;
  const Point& at;
  double operator()(Var v, int t = 0, int x = 0, int y = 0) const {
    return f.value(v, at, DerivIndex{t, x, y});
  }
};

template <std::size_t N>
void store(std::array<double, N>& value, std::array<double, N>& scale, int i, const Balance& b) {
  value[i] = b.value();
  scale[i] = b.scale();
}

// Elastic operator of a Cartesian momentum row: coefficients of
// u_a,xx  u_a,yy  u_b,xx  u_b,yy  u_a,xy  u_b,xy.
struct ElasticRow {
  double own_xx, own_yy, other_xx, other_yy, own_xy, other_xy;
};

ResidualVector cartesian(const FieldSource& field, const ModelParams& prm, const Point& at,
                         const ElasticRow& row1, const ElasticRow& row2) {
  const Reader d{field, at};
  using V = Var;
  const double s1 = prm.sigma1;

  const double u1_t = d(V::u1, 1), u2_t = d(V::u2, 1);
  const double u1_tt = d(V::u1, 2), u2_tt = d(V::u2, 2);
  const double u1_tx = d(V::u1, 1, 1), u2_ty = d(V::u2, 1, 0, 1);
  const double u1_xx = d(V::u1, 0, 2), u1_yy = d(V::u1, 0, 0, 2), u1_xy = d(V::u1, 0, 1, 1);
  const double u2_xx = d(V::u2, 0, 2), u2_yy = d(V::u2, 0, 0, 2), u2_xy = d(V::u2, 0, 1, 1);
  const double c = d(V::c), c_t = d(V::c, 1), c_x = d(V::c, 0, 1), c_y = d(V::c, 0, 0, 1);
  const double c_xx = d(V::c, 0, 2), c_yy = d(V::c, 0, 0, 2);
  const double ps_x = d(V::p, 0, 1) - s1 * c_x;
  const double ps_y = d(V::p, 0, 0, 1) - s1 * c_y;
  const double p_xx = d(V::p, 0, 2), p_yy = d(V::p, 0, 0, 2);
  const double lap_ps = p_xx + p_yy - s1 * (c_xx + c_yy);
  const double rho = d(V::rho), rho_t = d(V::rho, 1);
  const double rho_x = d(V::rho, 0, 1), rho_y = d(V::rho, 0, 0, 1);
  const double th = d(V::theta_f), th_t = d(V::theta_f, 1);
  const double th_x = d(V::theta_f, 0, 1), th_y = d(V::theta_f, 0, 0, 1);
  const double div_ut = u1_tx + u2_ty;

  ResidualVector r;
  {
    Balance b;
    b.lhs(2.0 * u1_tx);
    b.lhs(2.0 * u2_ty);
    b.rhs(prm.k * p_xx);
    b.rhs(prm.k * p_yy);
    b.rhs(-prm.k * s1 * c_xx);
    b.rhs(-prm.k * s1 * c_yy);
    store(r.value, r.scale, 0, b);
  }
  const auto momentum = [&](double u_t, double u_tt, double own_xx, double own_yy,
                            double other_xx, double other_yy, double own_xy, double other_xy,
                            double ps_dir, const ElasticRow& e) {
    Balance b;
    b.lhs(rho * u_tt);
    b.lhs(u_t * rho_t);
    b.lhs(u_t * rho * div_ut);
    b.rhs(e.own_xx * own_xx);
    b.rhs(e.own_yy * own_yy);
    b.rhs(e.other_xx * other_xx);
    b.rhs(e.other_yy * other_yy);
    b.rhs(e.own_xy * own_xy);
    b.rhs(e.other_xy * other_xy);
    b.rhs(-ps_dir);
    return b;
  };
  store(r.value, r.scale, 1,
        momentum(u1_t, u1_tt, u1_xx, u1_yy, u2_xx, u2_yy, u1_xy, u2_xy, ps_x, row1));
  store(r.value, r.scale, 2,
        momentum(u2_t, u2_tt, u2_yy, u2_xx, u1_yy, u1_xx, u2_xy, u1_xy, ps_y, row2));
  {
    Balance b;
    b.lhs(rho_t);
    b.lhs(u1_t * rho_x);
    b.lhs(u2_t * rho_y);
    b.rhs(prm.k * (prm.rho_f0 - rho) * lap_ps);
    store(r.value, r.scale, 3, b);
  }
  {
    Balance b;
    b.lhs(th_t);
    b.lhs(u1_t * th_x);
    b.lhs(u2_t * th_y);
    b.rhs(prm.k * (1.0 - th) * lap_ps);
    store(r.value, r.scale, 4, b);
  }
  {
    Balance b;
    b.lhs(c_t * th);
    b.lhs(c * th_t);
    b.lhs(u1_t * (c_x * th + c * th_x));
    b.lhs(u2_t * (c_y * th + c * th_y));
    b.rhs(prm.D * c_xx);
    b.rhs(prm.D * c_yy);
    b.rhs(prm.k * (prm.S_sieve - th) * c * lap_ps);
    b.rhs(prm.k * prm.S_sieve * c_x * ps_x);
    b.rhs(prm.k * prm.S_sieve * c_y * ps_y);
    store(r.value, r.scale, 5, b);
  }
  return r;
}

}  // namespace

std::string_view equation_name(Equation e) {
  switch (e) {
    case Equation::continuity: return "continuity";
    case Equation::momentum1: return "momentum1";
    case Equation::momentum2: return "momentum2";
    case Equation::density: return "density";
    case Equation::porosity: return "porosity";
    case Equation::solute: return "solute";
  }
  return "?";
}

std::string_view ring_equation_name(RingEquation e) {
  switch (e) {
    case RingEquation::continuity: return "continuity";
    case RingEquation::momentum: return "momentum";
    case RingEquation::density: return "density";
    case RingEquation::porosity: return "porosity";
  }
  return "?";
}

double ResidualVector::max_abs() const {
  double m = 0.0;
  for (double v : value) m = std::max(m, std::abs(v));
  return m;
}

double RingResidual::max_abs() const {
  double m = 0.0;
  for (double v : value) m = std::max(m, std::abs(v));
  return m;
}

ResidualVector residual_cartesian_iso(const FieldSource& field, const ModelParams& params,
                                      const Point& at) {
  const double ls = lame_star(params);
  const double mu = params.mu;
  // Rows as (own_xx, own_yy, other_xx, other_yy, own_xy, other_xy); row 2
  // is read with x and y swapped.
  const ElasticRow row{ls, mu, 0.0, 0.0, 0.0, ls - mu};
  return cartesian(field, params, at, row, row);
}

ResidualVector residual_cartesian_aniso(const FieldSource& field, const AnisotropicModuli& m,
                                        const ModelParams& params, const Point& at) {
  const ElasticRow row1{m.e11, m.e33, m.e13, m.e23, 2.0 * m.e13, m.e12 + m.e33};
  // Second row: E22 u2_yy + E33 u2_xx + E13 u1_xx + E23 u1_yy + 2E23 u2_xy +
  // (E12+E33) u1_xy, with own_xx/own_yy meaning u2_yy/u2_xx and
  // other_xx/other_yy meaning u1_yy/u1_xx.
  const ElasticRow row2{m.e22, m.e33, m.e23, m.e13, 2.0 * m.e23, m.e12 + m.e33};
  return cartesian(field, params, at, row1, row2);
}

ResidualVector residual_radial_full(const FieldSource& polar, const ModelParams& prm,
                                    const Point& at) {
  const double r = at.x;
  if (!(r > 0.0)) throw std::invalid_argument("polar residuals need r > 0");
  const Reader d{polar, at};
  using V = Var;
  const double ls = lame_star(prm), mu = prm.mu, s1 = prm.sigma1;

  const double w1 = d(V::u1), w1_r = d(V::u1, 0, 1), w1_rr = d(V::u1, 0, 2);
  const double w1_t = d(V::u1, 1), w1_tt = d(V::u1, 2), w1_tr = d(V::u1, 1, 1);
  const double w1_f = d(V::u1, 0, 0, 1), w1_ff = d(V::u1, 0, 0, 2), w1_rf = d(V::u1, 0, 1, 1);
  const double w2 = d(V::u2), w2_r = d(V::u2, 0, 1), w2_rr = d(V::u2, 0, 2);
  const double w2_t = d(V::u2, 1), w2_tt = d(V::u2, 2), w2_tf = d(V::u2, 1, 0, 1);
  const double w2_f = d(V::u2, 0, 0, 1), w2_ff = d(V::u2, 0, 0, 2), w2_rf = d(V::u2, 0, 1, 1);
  const double C = d(V::c), C_t = d(V::c, 1), C_r = d(V::c, 0, 1), C_f = d(V::c, 0, 0, 1);
  const double C_rr = d(V::c, 0, 2), C_ff = d(V::c, 0, 0, 2);
  const double P_r = d(V::p, 0, 1) - s1 * C_r;
  const double P_rr = d(V::p, 0, 2) - s1 * C_rr;
  const double P_f = d(V::p, 0, 0, 1) - s1 * C_f;
  const double P_ff = d(V::p, 0, 0, 2) - s1 * C_ff;
  const double vr = d(V::rho), vr_t = d(V::rho, 1), vr_r = d(V::rho, 0, 1), vr_f = d(V::rho, 0, 0, 1);
  const double th = d(V::theta_f), th_t = d(V::theta_f, 1);
  const double th_r = d(V::theta_f, 0, 1), th_f = d(V::theta_f, 0, 0, 1);

  // P_ff/r + (r P_r)_r, the polar Laplacian times r.
  const double r_lap = P_ff / r + P_r + r * P_rr;

  ResidualVector res;
  {
    Balance b;
    b.lhs(w1_t);
    b.lhs(r * w1_tr);
    b.lhs(w2_tf);
    b.rhs(prm.k / (2.0 * r) * P_ff);
    b.rhs(0.5 * prm.k * P_r);
    b.rhs(0.5 * prm.k * r * P_rr);
    store(res.value, res.scale, 0, b);
  }
  const auto inertia = [&](Balance& b, double u_t, double u_tt) {
    b.lhs(u_t * vr_t);
    b.lhs(u_t * vr * w1_tr);
    b.lhs(u_t * vr * w1_t / r);
    b.lhs(u_t * vr * w2_tf / r);
    b.lhs(vr * u_tt);
  };
  {
    Balance b;
    inertia(b, w1_t, w1_tt);
    b.rhs(-P_r);
    b.rhs(ls * w1_rr);
    b.rhs(ls * w1_r / r);
    b.rhs(-ls * w1 / (r * r));
    b.rhs((ls - mu) * w2_rf / r);
    b.rhs(mu * w1_ff / (r * r));
    b.rhs(-(ls + mu) * w2_f / (r * r));
    store(res.value, res.scale, 1, b);
  }
  {
    Balance b;
    inertia(b, w2_t, w2_tt);
    b.rhs(-P_f / r);
    b.rhs(mu * w2_rr);
    b.rhs(mu * w2_r / r);
    b.rhs(-mu * w2 / (r * r));
    b.rhs((ls - mu) * w1_rf / r);
    b.rhs(ls * w2_ff / (r * r));
    b.rhs((ls + mu) * w1_f / (r * r));
    store(res.value, res.scale, 2, b);
  }
  const auto transport = [&](double q_t, double q_r, double q_f, double sink) {
    Balance b;
    b.lhs(r * q_t);
    b.lhs(r * q_r * w1_t);
    b.lhs(q_f * w2_t);
    b.rhs(prm.k * sink * r_lap);
    return b;
  };
  store(res.value, res.scale, 3, transport(vr_t, vr_r, vr_f, prm.rho_f0 - vr));
  store(res.value, res.scale, 4, transport(th_t, th_r, th_f, 1.0 - th));
  {
    const double q_t = C_t * th + C * th_t;
    const double q_r = C_r * th + C * th_r;
    const double q_f = C_f * th + C * th_f;
    Balance b;
    b.lhs(r * q_t);
    b.lhs(r * q_r * w1_t);
    b.lhs(q_f * w2_t);
    b.rhs(prm.D * (C_ff / r + C_r + r * C_rr));
    b.rhs(prm.k * (prm.S_sieve - th) * C * r_lap);
    b.rhs(prm.k * prm.S_sieve / r * C_f * P_f);
    b.rhs(prm.k * prm.S_sieve * r * C_r * P_r);
    store(res.value, res.scale, 5, b);
  }
  return res;
}

ResidualVector residual_radial_reduced(const FieldSource& polar, const ModelParams& prm,
                                       const Point& at) {
  const double r = at.x;
  if (!(r > 0.0)) throw std::invalid_argument("polar residuals need r > 0");
  const Reader d{polar, at};
  using V = Var;
  const double ls = lame_star(prm), mu = prm.mu, s1 = prm.sigma1;

  const double w1 = d(V::u1), w1_r = d(V::u1, 0, 1), w1_rr = d(V::u1, 0, 2);
  const double w1_t = d(V::u1, 1), w1_tt = d(V::u1, 2), w1_tr = d(V::u1, 1, 1);
  const double w2 = d(V::u2), w2_r = d(V::u2, 0, 1), w2_rr = d(V::u2, 0, 2);
  const double w2_t = d(V::u2, 1), w2_tt = d(V::u2, 2);
  const double C = d(V::c), C_t = d(V::c, 1), C_r = d(V::c, 0, 1), C_rr = d(V::c, 0, 2);
  const double P_r = d(V::p, 0, 1) - s1 * C_r;
  const double P_rr = d(V::p, 0, 2) - s1 * C_rr;
  const double vr = d(V::rho), vr_t = d(V::rho, 1), vr_r = d(V::rho, 0, 1);
  const double th = d(V::theta_f), th_t = d(V::theta_f, 1), th_r = d(V::theta_f, 0, 1);
  const double r_lap = P_r + r * P_rr;

  ResidualVector res;
  {
    Balance b;
    b.lhs(w1_t);
    b.lhs(r * w1_tr);
    b.rhs(0.5 * prm.k * P_r);
    b.rhs(0.5 * prm.k * r * P_rr);
    store(res.value, res.scale, 0, b);
  }
  const auto inertia = [&](Balance& b, double u_t, double u_tt) {
    b.lhs(u_t * vr_t);
    b.lhs(u_t * vr * w1_tr);
    b.lhs(u_t * vr * w1_t / r);
    b.lhs(vr * u_tt);
  };
  {
    Balance b;
    inertia(b, w1_t, w1_tt);
    b.rhs(-P_r);
    b.rhs(ls * w1_rr);
    b.rhs(ls * w1_r / r);
    b.rhs(-ls * w1 / (r * r));
    store(res.value, res.scale, 1, b);
  }
  {
    Balance b;
    inertia(b, w2_t, w2_tt);
    b.rhs(mu * w2_rr);
    b.rhs(mu * w2_r / r);
    b.rhs(-mu * w2 / (r * r));
    store(res.value, res.scale, 2, b);
  }
  const auto transport = [&](double q_t, double q_r, double sink) {
    Balance b;
    b.lhs(r * q_t);
    b.lhs(r * q_r * w1_t);
    b.rhs(prm.k * sink * r_lap);
    return b;
  };
  store(res.value, res.scale, 3, transport(vr_t, vr_r, prm.rho_f0 - vr));
  store(res.value, res.scale, 4, transport(th_t, th_r, 1.0 - th));
  {
    Balance b;
    b.lhs(r * (C_t * th + C * th_t));
    b.lhs(r * (C_r * th + C * th_r) * w1_t);
    b.rhs(prm.D * (C_r + r * C_rr));
    b.rhs(prm.k * (prm.S_sieve - th) * C * r_lap);
    b.rhs(prm.k * prm.S_sieve * r * C_r * P_r);
    store(res.value, res.scale, 5, b);
  }
  return res;
}

ResidualVector polar_normalised(const ResidualVector& cart, double r, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  ResidualVector out;
  out.value[0] = 0.5 * r * cart.value[0];
  out.scale[0] = 0.5 * r * cart.scale[0];
  out.value[1] = c * cart.value[1] + s * cart.value[2];
  out.value[2] = -s * cart.value[1] + c * cart.value[2];
  out.scale[1] = std::abs(c) * cart.scale[1] + std::abs(s) * cart.scale[2];
  out.scale[2] = std::abs(s) * cart.scale[1] + std::abs(c) * cart.scale[2];
  for (int i = 3; i < kEquationCount; ++i) {
    out.value[i] = r * cart.value[i];
    out.scale[i] = r * cart.scale[i];
  }
  return out;
}

RingResidual residual_ring(const FieldSource& radial, const ModelParams& prm, double t, double r,
                           const RingOptions& opt) {
  if (!(r >= 0.0)) throw std::invalid_argument("ring residual: r must be >= 0");
  if (opt.r_max > 0.0 && r > opt.r_max)
    throw std::invalid_argument("ring residual: r outside the domain");
  const Point at{t, r, 0.0};
  const Reader d{radial, at};
  using V = Var;
  const double ls = lame_star(prm);

  const double w = d(V::u1), w_r = d(V::u1, 0, 1), w_rr = d(V::u1, 0, 2);
  const double w_t = d(V::u1, 1), w_tr = d(V::u1, 1, 1);
  const double P_r = d(V::p, 0, 1), P_rr = d(V::p, 0, 2);
  const double vr = d(V::rho), vr_t = d(V::rho, 1), vr_r = d(V::rho, 0, 1);
  const double th = d(V::theta_f), th_t = d(V::theta_f, 1), th_r = d(V::theta_f, 0, 1);

  const bool origin = (r == 0.0);
  const double wt_over_r = origin ? w_tr : w_t / r;
  const double pr_over_r = origin ? P_rr : P_r / r;
  const double lap_p = P_rr + pr_over_r;

  RingResidual res;
  {
    Balance b;
    b.lhs(w_tr);
    b.lhs(wt_over_r);
    b.rhs(0.5 * prm.k * P_rr);
    b.rhs(0.5 * prm.k * pr_over_r);
    store(res.value, res.scale, 0, b);
  }
  {
    Balance b;
    if (!opt.quasi_static) {
      const double w_tt = d(V::u1, 2);
      b.lhs(w_t * vr_t);
      b.lhs(w_t * vr * w_tr);
      b.lhs(w_t * vr * wt_over_r);
      b.lhs(vr * w_tt);
    }
    b.rhs(-P_r);
    b.rhs(ls * w_rr);
    if (origin) {
      b.rhs(0.5 * ls * w_rr);
    } else {
      b.rhs(ls * w_r / r);
      b.rhs(-ls * w / (r * r));
    }
    store(res.value, res.scale, 1, b);
  }
  {
    Balance b;
    b.lhs(vr_t);
    b.lhs(vr_r * w_t);
    b.rhs(prm.k * (prm.rho_f0 - vr) * lap_p);
    store(res.value, res.scale, 2, b);
  }
  {
    Balance b;
    b.lhs(th_t);
    b.lhs(th_r * w_t);
    b.rhs(prm.k * (1.0 - th) * lap_p);
    store(res.value, res.scale, 3, b);
  }
  return res;
}

FluxBundle fluxes(const FieldSource& field, const ModelParams& prm, const Point& at) {
  const Reader d{field, at};
  using V = Var;
  const double th = d(V::theta_f), rho = d(V::rho), c = d(V::c);
  const std::array<double, 2> u_t{d(V::u1, 1), d(V::u2, 1)};
  const std::array<double, 2> grad_ps{d(V::p, 0, 1) - prm.sigma1 * d(V::c, 0, 1),
                                      d(V::p, 0, 0, 1) - prm.sigma1 * d(V::c, 0, 0, 1)};
  const std::array<double, 2> grad_c{d(V::c, 0, 1), d(V::c, 0, 0, 1)};
  const double th_m = 1.0 - th;
  const double rho_m = (rho - prm.rho_f0 * th) / th_m;

  FluxBundle f;
  for (int i = 0; i < 2; ++i) {
    f.j_vf[i] = th * u_t[i] - prm.k * grad_ps[i];
    f.j_vm[i] = th_m * u_t[i];
    f.j_v[i] = f.j_vf[i] + f.j_vm[i];
    f.j_rho[i] = prm.rho_f0 * f.j_vf[i] + rho_m * f.j_vm[i];
    f.j_s[i] = -prm.D * grad_c[i] - prm.S_sieve * prm.k * c * grad_ps[i] + th * c * u_t[i];
  }
  return f;
}

TerzaghiStress terzaghi_stress_radial(double w, double w_r, double P, double r,
                                      const ModelParams& prm) {
  if (!(r > 0.0)) throw std::invalid_argument("stress evaluation needs r > 0");
  const double ls = lame_star(prm);
  return {-P + ls * w_r + prm.lambda / r * w, -P + prm.lambda * w_r + ls / r * w};
}

}  // namespace pem
