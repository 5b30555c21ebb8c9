#include "pem/symmetry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pem {

namespace {

bool harmonic(const Polynomial2& p) {
  return p.laplacian().is_zero(1e-12 * std::max(1.0, p.max_abs_coeff()));
}

std::array<double, 2> elastic_apply(const AnisotropicModuli& m, double g1_xx, double g1_yy,
                                    double g1_xy, double g2_xx, double g2_yy, double g2_xy) {
  return {m.e11 * g1_xx + m.e33 * g1_yy + m.e13 * g2_xx + m.e23 * g2_yy + 2.0 * m.e13 * g1_xy +
              (m.e12 + m.e33) * g2_xy,
          m.e22 * g2_yy + m.e33 * g2_xx + m.e23 * g1_yy + m.e13 * g1_xx + 2.0 * m.e23 * g2_xy +
              (m.e12 + m.e33) * g1_xy};
}

double max_over_points(const DisplacementPair& g, const AnisotropicModuli& m,
                       std::span<const std::array<double, 2>> points) {
  double worst = 0.0;
  for (const auto& p : points) {
    const auto r = displacement_system_residual(g, m, p[0], p[1]);
    worst = std::max({worst, std::abs(r[0]), std::abs(r[1])});
  }
  return worst;
}

// Field seen through one group element. Derivatives follow from the chain
// rule applied to the wrapped source.
class TransformedField : public FieldSource {
 public:
  TransformedField(GroupElement element, FieldPtr base, double sigma1)
      : e_(std::move(element)), base_(std::move(base)), sigma1_(sigma1) {
    if (e_.kind == GroupKind::rotation) a_ = e_.rotation_matrix();
  }

  double value(Var v, const Point& at, const DerivIndex& d) const override {
    const Point pre = e_.preimage(at);
    const double eps = e_.parameter;
    switch (e_.kind) {
      case GroupKind::time_translation:
      case GroupKind::x_translation:
      case GroupKind::y_translation:
        return base_->value(v, pre, d);
      case GroupKind::rotation:
        return rotated(v, pre, d);
      case GroupKind::concentration_scaling: {
        const double s = std::exp(eps);
        if (v == Var::c) return s * base_->value(v, pre, d);
        if (v == Var::p && sigma1_ != 0.0)
          return base_->value(v, pre, d) + sigma1_ * (s - 1.0) * base_->value(Var::c, pre, d);
        return base_->value(v, pre, d);
      }
      case GroupKind::pressure_shift: {
        const double base = base_->value(v, pre, d);
        if (v != Var::p || d.spatial_order() != 0) return base;
        return base + eps * e_.g(Jet::variable(at.t, 0)).derivative(DerivIndex{d.t, 0, 0});
      }
      case GroupKind::displacement_shift: {
        const double base = base_->value(v, pre, d);
        if ((v != Var::u1 && v != Var::u2) || d.t != 0) return base;
        const Polynomial2& G = (v == Var::u1) ? e_.displacement->g1 : e_.displacement->g2;
        return base + eps * G.derivative(d.x, d.y)(at.x, at.y);
      }
    }
    return base_->value(v, pre, d);
  }

 private:
  // Spatial derivative along the directions dirs[0..n) of a scalar at pre.
  double directional(Var v, const Point& pre, int t_order,
                     const std::array<std::array<double, 2>, 2>& dirs, int n) const {
    const auto q = [&](int x, int y) { return base_->value(v, pre, DerivIndex{t_order, x, y}); };
    if (n == 0) return q(0, 0);
    if (n == 1) {
      double s = 0.0;
      if (dirs[0][0] != 0.0) s += dirs[0][0] * q(1, 0);
      if (dirs[0][1] != 0.0) s += dirs[0][1] * q(0, 1);
      return s;
    }
    const double cxx = dirs[0][0] * dirs[1][0];
    const double cxy = dirs[0][0] * dirs[1][1] + dirs[0][1] * dirs[1][0];
    const double cyy = dirs[0][1] * dirs[1][1];
    double s = 0.0;
    if (cxx != 0.0) s += cxx * q(2, 0);
    if (cxy != 0.0) s += cxy * q(1, 1);
    if (cyy != 0.0) s += cyy * q(0, 2);
    return s;
  }

  double rotated(Var v, const Point& pre, const DerivIndex& d) const {
    if (d.spatial_order() > 2)
      throw std::invalid_argument("rotated field: spatial order above 2");
    // d/dx' = A00 d/dx + A01 d/dy, d/dy' = A10 d/dx + A11 d/dy.
    std::array<std::array<double, 2>, 2> dirs{};
    int n = 0;
    for (int i = 0; i < d.x; ++i) dirs[n++] = a_[0];
    for (int i = 0; i < d.y; ++i) dirs[n++] = a_[1];
    if (v != Var::u1 && v != Var::u2) return directional(v, pre, d.t, dirs, n);
    const auto& row = a_[v == Var::u1 ? 0 : 1];
    double s = 0.0;
    if (row[0] != 0.0) s += row[0] * directional(Var::u1, pre, d.t, dirs, n);
    if (row[1] != 0.0) s += row[1] * directional(Var::u2, pre, d.t, dirs, n);
    return s;
  }

  GroupElement e_;
  FieldPtr base_;
  double sigma1_;
  std::array<std::array<double, 2>, 2> a_{};
};

bool inside(const GridSpec& s, const Point& p) {
  const auto axis = [](double v, double v0, double h, int n) {
    if (n == 1) return std::abs(v - v0) <= 1e-9 * std::max(1.0, std::abs(h));
    const double u = (v - v0) / h;
    return u >= -1e-9 && u <= (n - 1) + 1e-9;
  };
  return axis(p.t, s.t0, s.dt, s.nt) && axis(p.x, s.x0, s.hx, s.nx) &&
         axis(p.y, s.y0, s.hy, s.ny);
}

bool maps_grid_into_itself(const GroupElement& e, const GridField& g) {
  const GridSpec& s = g.spec();
  for (int it = 0; it < s.nt; ++it)
    for (int ix = 0; ix < s.nx; ++ix)
      for (int iy = 0; iy < s.ny; ++iy)
        if (!inside(s, e.preimage(g.node(it, ix, iy)))) return false;
  return true;
}

}  // namespace

HarmonicPotentialPair::HarmonicPotentialPair(Polynomial2 phi, Polynomial2 psi)
    : phi_(std::move(phi)), psi_(std::move(psi)) {
  if (!harmonic(phi_)) throw std::invalid_argument("potential phi is not harmonic");
  if (!harmonic(psi_)) throw std::invalid_argument("potential psi is not harmonic");
}

DisplacementPair generate_displacement_symmetry(const HarmonicPotentialPair& pot) {
  return {pot.phi().derivative(1, 0) + pot.psi().derivative(0, 1),
          pot.phi().derivative(0, 1) - pot.psi().derivative(1, 0)};
}

std::array<double, 2> displacement_system_residual(const DisplacementPair& g,
                                                   const AnisotropicModuli& m, double x,
                                                   double y) {
  const auto d = [&](const Polynomial2& p, int dx, int dy) { return p.derivative(dx, dy)(x, y); };
  return elastic_apply(m, d(g.g1, 2, 0), d(g.g1, 0, 2), d(g.g1, 1, 1), d(g.g2, 2, 0),
                       d(g.g2, 0, 2), d(g.g2, 1, 1));
}

double verify_displacement_symmetry(const DisplacementPair& g, const ModelParams& params,
                                    std::span<const std::array<double, 2>> points) {
  return max_over_points(g, AnisotropicModuli::isotropic(params.lambda, params.mu), points);
}

double verify_displacement_symmetry(const DisplacementPair& g, const AnisotropicModuli& moduli,
                                    std::span<const std::array<double, 2>> points) {
  return max_over_points(g, moduli, points);
}

double verify_displacement_symmetry_fd(const PlaneFunction& g1, const PlaneFunction& g2,
                                       const ModelParams& params,
                                       std::span<const std::array<double, 2>> points, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("difference step must be > 0");
  const auto m = AnisotropicModuli::isotropic(params.lambda, params.mu);
  const auto xx = [h](const PlaneFunction& f, double x, double y) {
    return (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
  };
  const auto yy = [h](const PlaneFunction& f, double x, double y) {
    return (f(x, y + h) - 2.0 * f(x, y) + f(x, y - h)) / (h * h);
  };
  const auto xy = [h](const PlaneFunction& f, double x, double y) {
    return (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
  };
  double worst = 0.0;
  for (const auto& p : points) {
    const double x = p[0], y = p[1];
    const auto r =
        elastic_apply(m, xx(g1, x, y), yy(g1, x, y), xy(g1, x, y), xx(g2, x, y), yy(g2, x, y),
                      xy(g2, x, y));
    worst = std::max({worst, std::abs(r[0]), std::abs(r[1])});
  }
  return worst;
}

std::vector<DisplacementPair> elastic_kernel_basis(const AnisotropicModuli& m, int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("max_degree must be >= 0");
  std::vector<DisplacementPair> basis;
  for (int deg = 0; deg <= max_degree; ++deg) {
    // Unknowns: G1 coefficients of x^(deg-j) y^j, then G2 likewise.
    const int n = deg + 1;
    if (deg < 2) {
      for (int comp = 0; comp < 2; ++comp)
        for (int j = 0; j < n; ++j) {
          DisplacementPair g{Polynomial2(deg), Polynomial2(deg)};
          (comp == 0 ? g.g1 : g.g2).set(deg - j, j, 1.0);
          basis.push_back(std::move(g));
        }
      continue;
    }
    const int rows = deg - 1;  // monomials of degree deg-2 per equation
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * rows, 2 * n);
    for (int comp = 0; comp < 2; ++comp)
      for (int j = 0; j < n; ++j) {
        DisplacementPair g{Polynomial2(deg), Polynomial2(deg)};
        (comp == 0 ? g.g1 : g.g2).set(deg - j, j, 1.0);
        const auto d = [](const Polynomial2& p, int dx, int dy) { return p.derivative(dx, dy); };
        const Polynomial2 e1 = m.e11 * d(g.g1, 2, 0) + m.e33 * d(g.g1, 0, 2) +
                               m.e13 * d(g.g2, 2, 0) + m.e23 * d(g.g2, 0, 2) +
                               (2.0 * m.e13) * d(g.g1, 1, 1) + (m.e12 + m.e33) * d(g.g2, 1, 1);
        const Polynomial2 e2 = m.e22 * d(g.g2, 0, 2) + m.e33 * d(g.g2, 2, 0) +
                               m.e23 * d(g.g1, 0, 2) + m.e13 * d(g.g1, 2, 0) +
                               (2.0 * m.e23) * d(g.g2, 1, 1) + (m.e12 + m.e33) * d(g.g1, 1, 1);
        for (int k = 0; k < rows; ++k) {
          A(k, comp * n + j) = e1.coeff(deg - 2 - k, k);
          A(rows + k, comp * n + j) = e2.coeff(deg - 2 - k, k);
        }
      }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-12);
    const Eigen::MatrixXd kernel = lu.kernel();
    for (int c = 0; c < kernel.cols(); ++c) {
      const double norm = kernel.col(c).cwiseAbs().maxCoeff();
      if (norm == 0.0) continue;
      DisplacementPair g{Polynomial2(deg), Polynomial2(deg)};
      for (int j = 0; j < n; ++j) {
        g.g1.set(deg - j, j, kernel(j, c) / norm);
        g.g2.set(deg - j, j, kernel(n + j, c) / norm);
      }
      basis.push_back(std::move(g));
    }
  }
  return basis;
}

std::string group_kind_name(GroupKind kind) {
  switch (kind) {
    case GroupKind::time_translation: return "time_translation";
    case GroupKind::x_translation: return "x_translation";
    case GroupKind::y_translation: return "y_translation";
    case GroupKind::rotation: return "rotation";
    case GroupKind::concentration_scaling: return "concentration_scaling";
    case GroupKind::pressure_shift: return "pressure_shift";
    case GroupKind::displacement_shift: return "displacement_shift";
  }
  return "?";
}

GroupElement GroupElement::translation(GroupKind axis, double eps) {
  if (axis != GroupKind::time_translation && axis != GroupKind::x_translation &&
      axis != GroupKind::y_translation)
    throw std::invalid_argument("translation needs a translation kind");
  GroupElement e;
  e.kind = axis;
  e.parameter = eps;
  return e;
}

GroupElement GroupElement::rotation(double angle) {
  GroupElement e;
  e.kind = GroupKind::rotation;
  e.parameter = angle;
  return e;
}

GroupElement GroupElement::concentration_scaling(double eps) {
  GroupElement e;
  e.kind = GroupKind::concentration_scaling;
  e.parameter = eps;
  return e;
}

GroupElement GroupElement::pressure_shift(double eps, TimeFunction g) {
  GroupElement e;
  e.kind = GroupKind::pressure_shift;
  e.parameter = eps;
  e.g = std::move(g);
  e.validate();
  return e;
}

GroupElement GroupElement::displacement_shift(double eps, DisplacementPair G) {
  GroupElement e;
  e.kind = GroupKind::displacement_shift;
  e.parameter = eps;
  e.displacement = std::move(G);
  return e;
}

void GroupElement::validate() const {
  if (!std::isfinite(parameter)) throw std::invalid_argument("group parameter must be finite");
  if (kind == GroupKind::pressure_shift && !g)
    throw std::invalid_argument("pressure shift needs a time function");
  if (kind == GroupKind::displacement_shift && !displacement)
    throw std::invalid_argument("displacement shift needs a displacement pair");
}

std::array<std::array<double, 2>, 2> GroupElement::rotation_matrix() const {
  const double quarter = parameter / (std::numbers::pi / 2.0);
  const double k = std::round(quarter);
  double c = std::cos(parameter), s = std::sin(parameter);
  if (std::abs(quarter - k) <= 1e-12 * std::max(1.0, std::abs(k))) {
    static constexpr double kc[4] = {1.0, 0.0, -1.0, 0.0};
    static constexpr double ks[4] = {0.0, 1.0, 0.0, -1.0};
    const int q = static_cast<int>(((static_cast<long long>(k) % 4) + 4) % 4);
    c = kc[q];
    s = ks[q];
  }
  return {{{c, -s}, {s, c}}};
}

Point GroupElement::preimage(const Point& at) const {
  switch (kind) {
    case GroupKind::time_translation: return {at.t - parameter, at.x, at.y};
    case GroupKind::x_translation: return {at.t, at.x - parameter, at.y};
    case GroupKind::y_translation: return {at.t, at.x, at.y - parameter};
    case GroupKind::rotation: {
      const auto a = rotation_matrix();
      return {at.t, a[0][0] * at.x + a[1][0] * at.y, a[0][1] * at.x + a[1][1] * at.y};
    }
    default: return at;
  }
}

ResidualVector GroupElement::map_residual(const ResidualVector& r) const {
  ResidualVector out = r;
  if (kind == GroupKind::concentration_scaling) {
    const double s = std::exp(parameter);
    out.value[5] *= s;
    out.scale[5] *= s;
  } else if (kind == GroupKind::rotation) {
    const auto a = rotation_matrix();
    for (int i = 0; i < 2; ++i) {
      out.value[1 + i] = a[i][0] * r.value[1] + a[i][1] * r.value[2];
      out.scale[1 + i] = std::abs(a[i][0]) * r.scale[1] + std::abs(a[i][1]) * r.scale[2];
    }
  }
  return out;
}

std::string GroupElement::label() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.6g)", parameter);
  return group_kind_name(kind) + buf;
}

FieldPtr apply_group(const GroupElement& element, FieldPtr field, const ModelParams& params) {
  element.validate();
  if (!field) throw std::invalid_argument("apply_group: null field");
  return std::make_shared<TransformedField>(element, std::move(field), params.sigma1);
}

bool InvarianceReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const InvarianceRow& r) { return r.pass; });
}

InvarianceReport check_invariance(const GroupElement& element, FieldPtr field,
                                  const ModelParams& params, std::span<const Point> points,
                                  const InvarianceOptions& options) {
  if (options.moduli && element.kind == GroupKind::rotation)
    throw std::invalid_argument("rotation is not a symmetry of the anisotropic system");
  FieldPtr after = apply_group(element, field, params);
  if (const auto* grid = dynamic_cast<const GridField*>(field.get());
      grid && maps_grid_into_itself(element, *grid))
    after = std::make_shared<GridField>(GridField::sample(*after, grid->spec()));

  const auto residual = [&](const FieldSource& f, const Point& p) {
    return options.moduli ? residual_cartesian_aniso(f, *options.moduli, params, p)
                          : residual_cartesian_iso(f, params, p);
  };

  InvarianceReport report;
  report.element = element.label();
  for (int i = 0; i < kEquationCount; ++i) {
    InvarianceRow row;
    row.equation = static_cast<Equation>(i);
    row.tolerance = options.tolerance;
    report.rows.push_back(row);
  }
  for (const Point& p : points) {
    const ResidualVector pre = residual(*field, element.preimage(p));
    const ResidualVector expected = element.map_residual(pre);
    const ResidualVector post = residual(*after, p);
    for (int i = 0; i < kEquationCount; ++i) {
      InvarianceRow& row = report.rows[i];
      const double diff = std::abs(post.value[i] - expected.value[i]);
      const double scale = std::max(post.scale[i], expected.scale[i]);
      const double rel = diff == 0.0 ? 0.0 : (scale > 0.0 ? diff / scale : INFINITY);
      row.pre_norm = std::max(row.pre_norm, std::abs(pre.value[i]));
      row.post_norm = std::max(row.post_norm, std::abs(post.value[i]));
      row.max_diff = std::max(row.max_diff, diff);
      row.max_relative = std::max(row.max_relative, rel);
    }
  }
  for (auto& row : report.rows) row.pass = row.max_relative <= row.tolerance;
  return report;
}

PolarComponents cartesian_to_polar(double u1, double u2, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return {u1 * c + u2 * s, -u1 * s + u2 * c};
}

PolarComponents cartesian_to_polar(double u1, double u2, double x, double y) {
  const double r = std::hypot(x, y);
  if (r == 0.0) throw std::invalid_argument("polar angle undefined at the origin");
  const double c = x / r, s = y / r;
  return {u1 * c + u2 * s, -u1 * s + u2 * c};
}

ClosedFormField polar_view(const ClosedFormField& cartesian) {
  auto gen = cartesian.generator();
  return ClosedFormField([gen](const Jet& t, const Jet& r, const Jet& phi) {
    const Jet c = cos(phi), s = sin(phi);
    auto v = gen(t, r * c, r * s);
    const Jet u1 = v[0], u2 = v[1];
    v[0] = u1 * c + u2 * s;
    v[1] = u2 * c - u1 * s;
    return v;
  });
}

ClosedFormField random_polynomial_field(unsigned long long seed, int degree) {
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  struct Term {
    int a, b, c;
  };
  std::vector<Term> terms;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b)
      for (int c = 0; a + b + c <= degree; ++c) terms.push_back({a, b, c});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::array<std::vector<double>, kVarCount> table;
  for (auto& col : table) {
    col.resize(terms.size());
    for (double& v : col) v = coeff(rng);
  }
  table[static_cast<int>(Var::rho)][0] += 2.0;
  table[static_cast<int>(Var::theta_f)][0] += 0.5;

  return ClosedFormField([terms, table, degree](const Jet& t, const Jet& x, const Jet& y) {
    std::vector<Jet> tp(degree + 1, Jet(1.0)), xp(degree + 1, Jet(1.0)), yp(degree + 1, Jet(1.0));
    for (int i = 1; i <= degree; ++i) {
      tp[i] = tp[i - 1] * t;
      xp[i] = xp[i - 1] * x;
      yp[i] = yp[i - 1] * y;
    }
    ClosedFormField::Values out{};
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const Jet mono = tp[terms[k].a] * xp[terms[k].b] * yp[terms[k].c];
      for (int v = 0; v < kVarCount; ++v) out[v] += table[v][k] * mono;
    }
    return out;
  });
}

}  // namespace pem
