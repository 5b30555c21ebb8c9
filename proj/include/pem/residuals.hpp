#pragma once

// Pointwise residual operators of the governing systems. Every residual is
// (left-hand side) - (right-hand side) of the equation as printed, so an
// exact solution gives zero and any field source can be checked against it.
//
// Each component also carries a scale: the sum of the magnitudes of the
// individual terms. Comparisons "to relative tol" mean |a - b| <= tol * scale.

#include <array>
#include <string_view>

#include "pem/field.hpp"
#include "pem/params.hpp"

namespace pem {

enum class Equation { continuity = 0, momentum1, momentum2, density, porosity, solute };
inline constexpr int kEquationCount = 6;
std::string_view equation_name(Equation e);

struct ResidualVector {
  std::array<double, kEquationCount> value{};
  std::array<double, kEquationCount> scale{};

  double operator[](Equation e) const { return value[static_cast<int>(e)]; }
  double max_abs() const;
};

/// Isotropic Cartesian system in (u1, u2, p, rho, theta_f, c), with
/// p* = p - sigma1 c substituted internally.
ResidualVector residual_cartesian_iso(const FieldSource& field, const ModelParams& params,
                                      const Point& at);

/// Anisotropic Cartesian system. The continuity row is scaled by 2 so that
/// the isotropic embedding reproduces residual_cartesian_iso term by term.
ResidualVector residual_cartesian_aniso(const FieldSource& field, const AnisotropicModuli& moduli,
                                        const ModelParams& params, const Point& at);

/// Full polar system for a source in (t, r, phi) with variables
/// (w1, w2, P, varrho, Theta, C). P enters as P - sigma1 C. Requires r > 0.
ResidualVector residual_radial_full(const FieldSource& polar, const ModelParams& params,
                                    const Point& at);

/// Radially symmetric reduction; never queries phi derivatives.
ResidualVector residual_radial_reduced(const FieldSource& polar, const ModelParams& params,
                                       const Point& at);

/// Maps a Cartesian residual at (r cos phi, r sin phi) to the row
/// normalisation of the polar system: continuity * r/2, momentum rotated
/// into (radial, tangential), transport rows * r.
ResidualVector polar_normalised(const ResidualVector& cartesian, double r, double phi);

enum class RingEquation { continuity = 0, momentum, density, porosity };
inline constexpr int kRingEquationCount = 4;
std::string_view ring_equation_name(RingEquation e);

struct RingResidual {
  std::array<double, kRingEquationCount> value{};
  std::array<double, kRingEquationCount> scale{};

  double operator[](RingEquation e) const { return value[static_cast<int>(e)]; }
  double max_abs() const;
};

struct RingOptions {
  bool quasi_static = false;  ///< drop the inertial terms of the momentum row
  double r_max = 0.0;         ///< outer radius of the domain; <= 0 disables the check
};

/// Ring model (w2 = 0, C = 0) for a source in (t, r). At r = 0 the 1/r
/// terms take their regular limits (w_t/r -> w_tr, P_r/r -> P_rr,
/// w_r/r - w/r^2 -> w_rr/2).
RingResidual residual_ring(const FieldSource& radial, const ModelParams& params, double t,
                           double r, const RingOptions& options = {});

struct FluxBundle {
  using Vec = std::array<double, 2>;
  Vec j_vf{};   ///< fluid volumetric flux
  Vec j_vm{};   ///< matrix volumetric flux
  Vec j_v{};    ///< total volumetric flux, j_vf + j_vm
  Vec j_rho{};  ///< mass flux, rho_f j_vf + rho_m j_vm
  Vec j_s{};    ///< solute flux
};

FluxBundle fluxes(const FieldSource& field, const ModelParams& params, const Point& at);

struct TerzaghiStress {
  double tau11;  ///< radial
  double tau22;  ///< hoop
};

/// Effective stress of a radial displacement w(r) under pore pressure P.
TerzaghiStress terzaghi_stress_radial(double w, double w_r, double P, double r,
                                      const ModelParams& params);

}  // namespace pem
