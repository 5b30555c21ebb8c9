#include "pem/params.hpp"

#include <cmath>
#include <stdexcept>

#include "pem/errors.hpp"

namespace pem {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace

ParameterError::ParameterError(std::vector<std::string> violations)
    : std::invalid_argument("invalid parameters: " + join(violations)),
      violations_(std::move(violations)) {}

std::vector<std::string> param_violations(const ModelParams& p) {
  std::vector<std::string> v;
  const auto finite = [&](double x, const char* name) {
    if (!std::isfinite(x)) v.push_back(std::string(name) + " must be finite");
  };
  finite(p.k, "k");
  finite(p.lambda, "lambda");
  finite(p.mu, "mu");
  finite(p.rho_f0, "rho_f0");
  finite(p.D, "D");
  finite(p.S_sieve, "S_sieve");
  finite(p.sigma1, "sigma1");
  finite(p.p_a, "p_a");
  finite(p.p_st, "p_st");
  finite(p.F0, "F0");
  finite(p.r0, "r0");
  finite(p.R0, "R0");

  if (!(p.k > 0)) v.emplace_back("k must be > 0");
  if (!(p.D > 0)) v.emplace_back("D must be > 0");
  if (!(p.rho_f0 > 0)) v.emplace_back("rho_f0 must be > 0");
  if (!(p.S_sieve > 0 && p.S_sieve < 1)) v.emplace_back("0 < S < 1");
  if (!(p.lambda > 0)) v.emplace_back("lambda must be > 0");
  if (!(p.mu > 0)) v.emplace_back("mu must be > 0");
  if (!(p.r0 > 0)) v.emplace_back("r0 must be > 0");
  if (!(p.r0 < p.R0)) v.emplace_back("r0 < R0");
  return v;
}

ModelParams validate_params(const ModelParams& candidate) {
  auto v = param_violations(candidate);
  if (!v.empty()) throw ParameterError(std::move(v));
  return candidate;
}

MixtureFields mixture_fields(double theta_f, double rho, const ModelParams& params) {
  if (!(theta_f > 0.0 && theta_f < 1.0))
    throw std::domain_error("porosity must lie in (0, 1)");
  const double theta_m = 1.0 - theta_f;
  const double rho_m = (rho - params.rho_f0 * theta_f) / theta_m;
  if (!(rho_m > 0.0)) throw std::domain_error("matrix density must be > 0");
  return {theta_m, rho_m};
}

bool AnisotropicModuli::is_isotropic(double rel_tol) const {
  const auto iso = isotropic(e12, e33);
  const double scale = std::abs(e11) + std::abs(e22) + std::abs(e33) + std::abs(e12);
  const double tol = rel_tol * scale;
  return std::abs(e11 - iso.e11) <= tol && std::abs(e22 - iso.e22) <= tol &&
         std::abs(e13) <= tol && std::abs(e23) <= tol;
}

AnisotropicModuli validate_moduli(const AnisotropicModuli& m) {
  std::vector<std::string> v;
  if (!(m.e11 > 0)) v.emplace_back("e11 must be > 0");
  if (!(m.e22 > 0)) v.emplace_back("e22 must be > 0");
  if (!(m.e33 > 0)) v.emplace_back("e33 must be > 0");
  if (!(m.e12 >= 0)) v.emplace_back("e12 must be >= 0");
  if (!(m.e13 >= 0)) v.emplace_back("e13 must be >= 0");
  if (!(m.e23 >= 0)) v.emplace_back("e23 must be >= 0");
  if (!v.empty()) throw ParameterError(std::move(v));
  return m;
}

Scales Scales::reference(const ModelParams& p) {
  return {p.R0, p.mu, p.R0 * p.R0 / (p.k * p.mu)};
}

ModelParams nondimensionalize(const ModelParams& p, const Scales& s) {
  if (!(s.length > 0 && s.pressure > 0 && s.time > 0))
    throw std::invalid_argument("characteristic scales must be > 0");
  const double L = s.length, Pc = s.pressure, T = s.time;
  ModelParams q = p;
  q.k = p.k * Pc * T / (L * L);
  q.lambda = p.lambda / Pc;
  q.mu = p.mu / Pc;
  q.rho_f0 = p.rho_f0 * L * L / (Pc * T * T);
  q.D = p.D * T / (L * L);
  q.sigma1 = p.sigma1 / Pc;
  q.p_a = p.p_a / Pc;
  q.p_st = p.p_st / Pc;
  q.F0 = p.F0 / (Pc * L);
  q.r0 = p.r0 / L;
  q.R0 = p.R0 / L;
  return q;
}

}  // namespace pem
