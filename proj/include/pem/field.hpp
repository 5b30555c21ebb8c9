#pragma once

// Field sources: the six unknown fields and their derivatives at a
// space-time point, either from closed-form expressions (exact jets) or
// from sampled grids (finite-difference stencils).
//
// Sources are coordinate agnostic. Cartesian sources read a Point as
// (t, x, y) and the variables as (u1, u2, p, rho, theta_f, c); polar
// sources read it as (t, r, phi) and the variables as (w1, w2, P, varrho,
// Theta, C).

#include <array>
#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "pem/jet.hpp"

namespace pem {

enum class Var { u1 = 0, u2, p, rho, theta_f, c };
inline constexpr int kVarCount = 6;
inline constexpr std::array<Var, kVarCount> kAllVars{Var::u1, Var::u2, Var::p,
                                                     Var::rho, Var::theta_f, Var::c};

std::string_view var_name(Var v);

struct Point {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

class FieldSource {
 public:
  virtual ~FieldSource() = default;

  /// Value (d = {}) or partial derivative of `v` at `at`. Throws
  /// DerivativeUnavailable when the source cannot supply the derivative.
  virtual double value(Var v, const Point& at, const DerivIndex& d = {}) const = 0;
};

using FieldPtr = std::shared_ptr<const FieldSource>;

/// Field given by one generator returning all six variables as jets.
/// Supplies every derivative of total order <= 2.
class ClosedFormField : public FieldSource {
 public:
  using Values = std::array<Jet, kVarCount>;
  using Generator = std::function<Values(const Jet& t, const Jet& x, const Jet& y)>;

  explicit ClosedFormField(Generator gen) : gen_(std::move(gen)) {}

  double value(Var v, const Point& at, const DerivIndex& d = {}) const override;
  Values jets(const Point& at) const;
  const Generator& generator() const { return gen_; }

 private:
  Generator gen_;
};

/// Uniform tensor grid in (t, x, y). An axis with n = 1 is a single slice
/// and provides no derivatives along it.
struct GridSpec {
  double t0 = 0.0, dt = 1.0;
  int nt = 1;
  double x0 = 0.0, hx = 1.0;
  int nx = 1;
  double y0 = 0.0, hy = 1.0;
  int ny = 1;

  /// Square grid centred on the origin with nodes at -half..half (2*half+1
  /// per side), time levels t - dt, t, t + dt.
  static GridSpec square(int half, double h, double t, double dt);
};

/// Grid-backed field. Derivatives use second-order centred stencils in the
/// interior and second-order one-sided stencils at the edges; mixed partials
/// are tensor products of the 1D operators. Off-node queries interpolate the
/// nodal derivatives multilinearly.
class GridField : public FieldSource {
 public:
  GridField(GridSpec spec, std::array<std::vector<double>, kVarCount> data);

  /// Samples the values (not derivatives) of `src` at every node.
  static GridField sample(const FieldSource& src, const GridSpec& spec);

  double value(Var v, const Point& at, const DerivIndex& d = {}) const override;

  const GridSpec& spec() const { return spec_; }
  Point node(int it, int ix, int iy) const;
  double nodal(Var v, int it, int ix, int iy) const {
    return data_[static_cast<int>(v)][index(it, ix, iy)];
  }

 private:
  std::size_t index(int it, int ix, int iy) const {
    return (static_cast<std::size_t>(it) * spec_.nx + ix) * spec_.ny + iy;
  }
  double nodal_derivative(Var v, int it, int ix, int iy, const DerivIndex& d) const;

  GridSpec spec_;
  std::array<std::vector<double>, kVarCount> data_;
};

}  // namespace pem
