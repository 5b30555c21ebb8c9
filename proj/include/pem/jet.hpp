#pragma once

// Second-order forward-mode jets in three variables (t, x, y).
//
// A Jet carries a value, its gradient and its (symmetric) Hessian with
// respect to the seed variables. Closed-form fields are written once as
// ordinary arithmetic on Jets and every derivative of total order <= 2
// comes out exactly (up to rounding), which is what the residual oracles
// need.

#include <array>
#include <cmath>

namespace pem {

/// Multi-index of a partial derivative: orders in t and in the two spatial
/// coordinates (x, y for Cartesian sources, r, phi for polar sources).
struct DerivIndex {
  int t = 0;
  int x = 0;
  int y = 0;

  constexpr int order() const { return t + x + y; }
  constexpr int spatial_order() const { return x + y; }
  friend constexpr bool operator==(const DerivIndex&, const DerivIndex&) = default;
};

class Jet {
 public:
  static constexpr int kVars = 3;

  constexpr Jet() = default;
  constexpr Jet(double value) : v_(value) {}  // NOLINT: constants promote implicitly

  /// Seeds variable `var` (0 = t, 1 = x, 2 = y) at `value`.
  static constexpr Jet variable(double value, int var) {
    Jet j(value);
    j.g_[var] = 1.0;
    return j;
  }

  constexpr double value() const { return v_; }
  constexpr double grad(int i) const { return g_[i]; }
  constexpr double hess(int i, int j) const { return h_[sym(i, j)]; }

  /// Derivative selected by a multi-index of total order <= 2.
  /// Returns NaN for higher orders; callers decide whether that is an error.
  double derivative(const DerivIndex& d) const {
    switch (d.order()) {
      case 0:
        return v_;
      case 1:
        return g_[d.t ? 0 : (d.x ? 1 : 2)];
      case 2: {
        std::array<int, 2> ax{};
        int n = 0;
        for (int k = 0; k < d.t; ++k) ax[n++] = 0;
        for (int k = 0; k < d.x; ++k) ax[n++] = 1;
        for (int k = 0; k < d.y; ++k) ax[n++] = 2;
        return h_[sym(ax[0], ax[1])];
      }
      default:
        return std::nan("");
    }
  }

  // Chain rule for a scalar function with f(v), f'(v), f''(v) known.
  constexpr Jet apply(double f, double df, double d2f) const {
    Jet r(f);
    for (int i = 0; i < kVars; ++i) r.g_[i] = df * g_[i];
    for (int i = 0; i < kVars; ++i)
      for (int j = i; j < kVars; ++j)
        r.h_[sym(i, j)] = df * h_[sym(i, j)] + d2f * g_[i] * g_[j];
    return r;
  }

  constexpr Jet& operator+=(const Jet& o) {
    v_ += o.v_;
    for (int i = 0; i < kVars; ++i) g_[i] += o.g_[i];
    for (int i = 0; i < 6; ++i) h_[i] += o.h_[i];
    return *this;
  }
  constexpr Jet& operator-=(const Jet& o) {
    v_ -= o.v_;
    for (int i = 0; i < kVars; ++i) g_[i] -= o.g_[i];
    for (int i = 0; i < 6; ++i) h_[i] -= o.h_[i];
    return *this;
  }
  constexpr Jet& operator*=(double s) {
    v_ *= s;
    for (auto& x : g_) x *= s;
    for (auto& x : h_) x *= s;
    return *this;
  }
  constexpr Jet& operator*=(const Jet& o) { return *this = *this * o; }
  constexpr Jet& operator/=(const Jet& o) { return *this = *this / o; }

  constexpr Jet operator-() const {
    Jet r = *this;
    r *= -1.0;
    return r;
  }

  friend constexpr Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend constexpr Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend constexpr Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.v_ * b.v_);
    for (int i = 0; i < kVars; ++i) r.g_[i] = a.v_ * b.g_[i] + b.v_ * a.g_[i];
    for (int i = 0; i < kVars; ++i)
      for (int j = i; j < kVars; ++j) {
        const int k = sym(i, j);
        r.h_[k] = a.v_ * b.h_[k] + b.v_ * a.h_[k] + a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i];
      }
    return r;
  }
  friend constexpr Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }

  constexpr Jet reciprocal() const {
    const double inv = 1.0 / v_;
    return apply(inv, -inv * inv, 2.0 * inv * inv * inv);
  }

 private:
  static constexpr int sym(int i, int j) {
    if (i > j) {
      const int k = i;
      i = j;
      j = k;
    }
    // (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
    return i == 0 ? j : (i == 1 ? 2 + j : 5);
  }

  double v_ = 0.0;
  std::array<double, kVars> g_{};
  std::array<double, 6> h_{};
};

inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.value());
  return a.apply(s, 0.5 / s, -0.25 / (s * a.value()));
}
inline Jet log(const Jet& a) {
  const double inv = 1.0 / a.value();
  return a.apply(std::log(a.value()), inv, -inv * inv);
}
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.apply(e, e, e);
}
inline Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(s, c, -s);
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(c, -s, -c);
}
/// Integer power; exact for the polynomial fields used in the tests.
inline Jet pow(const Jet& a, int n) {
  Jet r(1.0);
  for (int i = 0; i < n; ++i) r *= a;
  return r;
}

}  // namespace pem
