#pragma once

// Physical constants of the poroelastic model and the checks that make a
// parameter set usable.

#include <string>
#include <vector>

namespace pem {

/// Constants of the isotropic model. Defaults are placeholders chosen for
/// readable dimensionless runs, not measured material values.
struct ModelParams {
  double k = 1.0;        ///< hydraulic conductivity
  double lambda = 1.0;   ///< first Lame coefficient
  double mu = 1.0;       ///< shear modulus
  double rho_f0 = 1.0;   ///< fluid density (incompressible)
  double D = 1.0;        ///< solute diffusivity
  double S_sieve = 0.5;  ///< sieving coefficient, 0 < S < 1
  double sigma1 = 0.0;   ///< osmotic coefficient: p* = p - sigma1 * c
  double p_a = 0.0;      ///< ambient pressure
  double p_st = 0.0;     ///< steady interior pressure
  double F0 = 0.0;       ///< boundary load, total force per unit thickness
  double r0 = 1.0;       ///< inner radius of the annulus
  double R0 = 2.0;       ///< initial outer radius

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Lists every violated restriction; empty when the set is admissible.
std::vector<std::string> param_violations(const ModelParams& candidate);

/// Returns the candidate unchanged when admissible, otherwise throws
/// ParameterError naming every violation.
ModelParams validate_params(const ModelParams& candidate);

/// P-wave modulus lambda + 2 mu.
inline double lame_star(const ModelParams& p) { return p.lambda + 2.0 * p.mu; }

struct MixtureFields {
  double theta_m;  ///< matrix volume fraction
  double rho_m;    ///< matrix density
};

/// Splits the mixture density into phase quantities given the porosity.
/// Throws std::domain_error for porosity outside (0, 1) or a non-positive
/// matrix density.
MixtureFields mixture_fields(double theta_f, double rho, const ModelParams& params);

/// Symmetric 2D stiffness entries. The (1,3), (2,3) and (3,3) entries enter
/// the governing equations as printed, without the sqrt(2) and 2 factors of
/// the Voigt-form matrix.
struct AnisotropicModuli {
  double e11 = 0.0;
  double e22 = 0.0;
  double e33 = 0.0;
  double e12 = 0.0;
  double e13 = 0.0;
  double e23 = 0.0;

  static AnisotropicModuli isotropic(double lambda, double mu) {
    return {lambda + 2.0 * mu, lambda + 2.0 * mu, mu, lambda, 0.0, 0.0};
  }

  bool is_isotropic(double rel_tol = 0.0) const;
  /// (lambda, mu) read back from an isotropic embedding.
  double lambda() const { return e12; }
  double mu() const { return e33; }

  friend bool operator==(const AnisotropicModuli&, const AnisotropicModuli&) = default;
};

/// Throws ParameterError unless e_ii > 0 and e_ij >= 0.
AnisotropicModuli validate_moduli(const AnisotropicModuli& candidate);

/// Characteristic scales used to make a parameter set dimensionless.
struct Scales {
  double length = 1.0;
  double pressure = 1.0;
  double time = 1.0;

  /// length = R0, pressure = mu, time = R0^2 / (k mu).
  static Scales reference(const ModelParams& p);
};

/// Rescales every constant by the given characteristic scales.
/// Concentrations are taken as already dimensionless.
ModelParams nondimensionalize(const ModelParams& p, const Scales& s);

}  // namespace pem
