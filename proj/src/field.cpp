#include "pem/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pem/errors.hpp"

namespace pem {

std::string_view var_name(Var v) {
  switch (v) {
    case Var::u1: return "u1";
    case Var::u2: return "u2";
    case Var::p: return "p";
    case Var::rho: return "rho";
    case Var::theta_f: return "thetaF";
    case Var::c: return "c";
  }
  return "?";
}

double ClosedFormField::value(Var v, const Point& at, const DerivIndex& d) const {
  if (d.order() > 2 || d.t < 0 || d.x < 0 || d.y < 0)
    throw DerivativeUnavailable("closed-form fields provide derivatives up to total order 2");
  return jets(at)[static_cast<int>(v)].derivative(d);
}

ClosedFormField::Values ClosedFormField::jets(const Point& at) const {
  return gen_(Jet::variable(at.t, 0), Jet::variable(at.x, 1), Jet::variable(at.y, 2));
}

GridSpec GridSpec::square(int half, double h, double t, double dt) {
  const int n = 2 * half + 1;
  return {t - dt, dt, 3, -half * h, h, n, -half * h, h, n};
}

namespace {

struct Stencil {
  int count = 0;
  std::array<int, 4> idx{};
  std::array<double, 4> w{};

  void add(int i, double weight) {
    idx[count] = i;
    w[count] = weight;
    ++count;
  }
};

Stencil axis_stencil(int n, int i, int order, double h, char axis) {
  Stencil s;
  const auto unavailable = [&] {
    return DerivativeUnavailable(std::string("grid provides no order-") + std::to_string(order) +
                                 " derivative along " + axis);
  };
  switch (order) {
    case 0:
      s.add(i, 1.0);
      return s;
    case 1:
      if (n < 2) throw unavailable();
      if (n == 2) {
        s.add(0, -1.0 / h);
        s.add(1, 1.0 / h);
      } else if (i == 0) {
        s.add(0, -1.5 / h);
        s.add(1, 2.0 / h);
        s.add(2, -0.5 / h);
      } else if (i == n - 1) {
        s.add(n - 1, 1.5 / h);
        s.add(n - 2, -2.0 / h);
        s.add(n - 3, 0.5 / h);
      } else {
        s.add(i - 1, -0.5 / h);
        s.add(i + 1, 0.5 / h);
      }
      return s;
    case 2: {
      if (n < 3) throw unavailable();
      const double h2 = h * h;
      if (i > 0 && i < n - 1) {
        s.add(i - 1, 1.0 / h2);
        s.add(i, -2.0 / h2);
        s.add(i + 1, 1.0 / h2);
      } else if (n == 3) {
        s.add(0, 1.0 / h2);
        s.add(1, -2.0 / h2);
        s.add(2, 1.0 / h2);
      } else if (i == 0) {
        s.add(0, 2.0 / h2);
        s.add(1, -5.0 / h2);
        s.add(2, 4.0 / h2);
        s.add(3, -1.0 / h2);
      } else {
        s.add(n - 1, 2.0 / h2);
        s.add(n - 2, -5.0 / h2);
        s.add(n - 3, 4.0 / h2);
        s.add(n - 4, -1.0 / h2);
      }
      return s;
    }
    default:
      throw unavailable();
  }
}

struct AxisLocation {
  int i0;
  int i1;
  double w0;
  double w1;
};

AxisLocation locate(double coord, double origin, double h, int n, char axis) {
  const double s = (coord - origin) / h;
  const double nearest = std::round(s);
  if (std::abs(s - nearest) <= 1e-9) {
    const int i = static_cast<int>(nearest);
    if (i < 0 || i >= n)
      throw std::out_of_range(std::string("query outside grid along ") + axis);
    return {i, i, 1.0, 0.0};
  }
  if (n < 2 || s < 0.0 || s > n - 1)
    throw std::out_of_range(std::string("query outside grid along ") + axis);
  const int i = std::min(static_cast<int>(std::floor(s)), n - 2);
  const double f = s - i;
  return {i, i + 1, 1.0 - f, f};
}

}  // namespace

GridField::GridField(GridSpec spec, std::array<std::vector<double>, kVarCount> data)
    : spec_(spec), data_(std::move(data)) {
  if (spec_.nt < 1 || spec_.nx < 1 || spec_.ny < 1)
    throw std::invalid_argument("grid needs at least one node per axis");
  if (!(spec_.dt > 0 && spec_.hx > 0 && spec_.hy > 0))
    throw std::invalid_argument("grid spacings must be > 0");
  const std::size_t n = static_cast<std::size_t>(spec_.nt) * spec_.nx * spec_.ny;
  for (const auto& a : data_)
    if (a.size() != n) throw std::invalid_argument("grid data size mismatch");
}

GridField GridField::sample(const FieldSource& src, const GridSpec& spec) {
  const std::size_t n = static_cast<std::size_t>(spec.nt) * spec.nx * spec.ny;
  std::array<std::vector<double>, kVarCount> data;
  for (auto& a : data) a.resize(n);
  for (int it = 0; it < spec.nt; ++it)
    for (int ix = 0; ix < spec.nx; ++ix)
      for (int iy = 0; iy < spec.ny; ++iy) {
        const Point pt{spec.t0 + it * spec.dt, spec.x0 + ix * spec.hx, spec.y0 + iy * spec.hy};
        const std::size_t k = (static_cast<std::size_t>(it) * spec.nx + ix) * spec.ny + iy;
        for (Var v : kAllVars) data[static_cast<int>(v)][k] = src.value(v, pt);
      }
  return GridField(spec, std::move(data));
}

Point GridField::node(int it, int ix, int iy) const {
  return {spec_.t0 + it * spec_.dt, spec_.x0 + ix * spec_.hx, spec_.y0 + iy * spec_.hy};
}

double GridField::nodal_derivative(Var v, int it, int ix, int iy, const DerivIndex& d) const {
  const Stencil st = axis_stencil(spec_.nt, it, d.t, spec_.dt, 't');
  const Stencil sx = axis_stencil(spec_.nx, ix, d.x, spec_.hx, 'x');
  const Stencil sy = axis_stencil(spec_.ny, iy, d.y, spec_.hy, 'y');
  const auto& a = data_[static_cast<int>(v)];
  double sum = 0.0;
  for (int a_t = 0; a_t < st.count; ++a_t)
    for (int a_x = 0; a_x < sx.count; ++a_x)
      for (int a_y = 0; a_y < sy.count; ++a_y)
        sum += st.w[a_t] * sx.w[a_x] * sy.w[a_y] * a[index(st.idx[a_t], sx.idx[a_x], sy.idx[a_y])];
  return sum;
}

double GridField::value(Var v, const Point& at, const DerivIndex& d) const {
  if (d.t < 0 || d.x < 0 || d.y < 0 || d.t > 2 || d.spatial_order() > 2)
    throw DerivativeUnavailable("grid fields provide up to order 2 in time and order 2 in space");
  const AxisLocation lt = locate(at.t, spec_.t0, spec_.dt, spec_.nt, 't');
  const AxisLocation lx = locate(at.x, spec_.x0, spec_.hx, spec_.nx, 'x');
  const AxisLocation ly = locate(at.y, spec_.y0, spec_.hy, spec_.ny, 'y');
  const std::array<std::pair<int, double>, 2> ct{{{lt.i0, lt.w0}, {lt.i1, lt.w1}}};
  const std::array<std::pair<int, double>, 2> cx{{{lx.i0, lx.w0}, {lx.i1, lx.w1}}};
  const std::array<std::pair<int, double>, 2> cy{{{ly.i0, ly.w0}, {ly.i1, ly.w1}}};
  double sum = 0.0;
  for (const auto& [it, wt] : ct) {
    if (wt == 0.0) continue;
    for (const auto& [ix, wx] : cx) {
      if (wx == 0.0) continue;
      for (const auto& [iy, wy] : cy) {
        if (wy == 0.0) continue;
        sum += wt * wx * wy * nodal_derivative(v, it, ix, iy, d);
      }
    }
  }
  return sum;
}

}  // namespace pem
