#pragma once

// One-parameter symmetry groups of the Cartesian systems and their numerical
// verification. Invariance is checked literally: the residual of the
// transformed field at a point must equal the (suitably mapped) residual of
// the original field at the preimage, for arbitrary fields, not only for
// solutions.

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pem/field.hpp"
#include "pem/params.hpp"
#include "pem/polynomial.hpp"
#include "pem/residuals.hpp"

namespace pem {

/// Two harmonic plane potentials. Construction checks the Laplacians vanish.
class HarmonicPotentialPair {
 public:
  HarmonicPotentialPair(Polynomial2 phi, Polynomial2 psi);
  const Polynomial2& phi() const { return phi_; }
  const Polynomial2& psi() const { return psi_; }

 private:
  Polynomial2 phi_;
  Polynomial2 psi_;
};

/// Plane displacement (G1, G2) used by the displacement-shift group.
struct DisplacementPair {
  Polynomial2 g1;
  Polynomial2 g2;
};

/// G1 = phi_x + psi_y, G2 = phi_y - psi_x. Solves the linear elastic
/// system for every (lambda, mu) because div G and curl G both vanish.
DisplacementPair generate_displacement_symmetry(const HarmonicPotentialPair& potentials);

/// Residuals of the anisotropic linear system for G at (x, y); the isotropic
/// system is the special case AnisotropicModuli::isotropic(lambda, mu).
std::array<double, 2> displacement_system_residual(const DisplacementPair& g,
                                                   const AnisotropicModuli& moduli, double x,
                                                   double y);

/// Max |residual| over the sample points (analytic derivatives).
double verify_displacement_symmetry(const DisplacementPair& g, const ModelParams& params,
                                    std::span<const std::array<double, 2>> points);
double verify_displacement_symmetry(const DisplacementPair& g, const AnisotropicModuli& moduli,
                                    std::span<const std::array<double, 2>> points);

using PlaneFunction = std::function<double(double x, double y)>;

/// Same check with centred-difference derivatives of spacing h.
double verify_displacement_symmetry_fd(const PlaneFunction& g1, const PlaneFunction& g2,
                                       const ModelParams& params,
                                       std::span<const std::array<double, 2>> points, double h);

/// Basis of homogeneous polynomial solutions of the anisotropic linear
/// system for every degree 0..max_degree (null space of the coefficient map).
std::vector<DisplacementPair> elastic_kernel_basis(const AnisotropicModuli& moduli,
                                                   int max_degree);

enum class GroupKind {
  time_translation,
  x_translation,
  y_translation,
  rotation,
  concentration_scaling,
  pressure_shift,
  displacement_shift,
};

std::string group_kind_name(GroupKind kind);

using TimeFunction = std::function<Jet(const Jet& t)>;

struct GroupElement {
  GroupKind kind = GroupKind::time_translation;
  double parameter = 0.0;        ///< epsilon, or the angle for rotations
  TimeFunction g;                ///< pressure shift: p -> p + parameter * g(t)
  std::optional<DisplacementPair> displacement;  ///< u -> u + parameter * G

  static GroupElement translation(GroupKind axis, double eps);
  static GroupElement rotation(double angle);
  static GroupElement concentration_scaling(double eps);
  static GroupElement pressure_shift(double eps, TimeFunction g);
  static GroupElement displacement_shift(double eps, DisplacementPair G);

  /// Throws std::invalid_argument on a missing or malformed payload.
  void validate() const;

  /// Rotation matrix; entries are exact for multiples of pi/2.
  std::array<std::array<double, 2>, 2> rotation_matrix() const;

  /// Point whose original values the transformed field shows at `at`.
  Point preimage(const Point& at) const;

  /// Residual the transformed field must show, given the original residual
  /// at the preimage.
  ResidualVector map_residual(const ResidualVector& original) const;

  std::string label() const;
};

/// Transformed field, evaluated lazily through the chain rule. Concentration
/// scaling keeps p* fixed, so it also moves p by sigma1 (e^eps - 1) c.
FieldPtr apply_group(const GroupElement& element, FieldPtr field, const ModelParams& params);

struct InvarianceRow {
  Equation equation;
  double pre_norm = 0.0;   ///< max |residual| of the original field at preimages
  double post_norm = 0.0;  ///< max |residual| of the transformed field
  double max_diff = 0.0;   ///< max |post - mapped pre|
  double max_relative = 0.0;  ///< max |post - mapped pre| / scale
  double tolerance = 0.0;
  bool pass = false;
};

struct InvarianceReport {
  std::string element;
  std::vector<InvarianceRow> rows;
  bool pass() const;
};

struct InvarianceOptions {
  double tolerance = 1e-12;  ///< relative to the per-point term scale
  /// Check against the anisotropic system instead of the isotropic one.
  std::optional<AnisotropicModuli> moduli;
};

/// For grid sources the transformed field is resampled on the same grid, so
/// the comparison is between two discrete fields.
InvarianceReport check_invariance(const GroupElement& element, FieldPtr field,
                                  const ModelParams& params, std::span<const Point> points,
                                  const InvarianceOptions& options = {});

struct PolarComponents {
  double w1;
  double w2;
};

/// Inverse of the displacement rotation at angle phi.
PolarComponents cartesian_to_polar(double u1, double u2, double phi);
/// Same, with the angle taken from (x, y); throws at the origin.
PolarComponents cartesian_to_polar(double u1, double u2, double x, double y);

/// Closed-form Cartesian field re-expressed in (t, r, phi) with radial and
/// tangential displacement components.
ClosedFormField polar_view(const ClosedFormField& cartesian);

/// Manufactured field: independent random trivariate polynomials of the
/// given degree for each variable, reproducible from the seed.
ClosedFormField random_polynomial_field(unsigned long long seed, int degree = 3);

}  // namespace pem
