#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pem {

/// Raised by validate_params; carries every violated restriction.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// A field source was asked for a derivative it cannot provide.
class DerivativeUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solve did not converge.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double last_residual)
      : std::runtime_error(what), iterations_(iterations), last_residual_(last_residual) {}
  int iterations() const { return iterations_; }
  double last_residual() const { return last_residual_; }

 private:
  int iterations_;
  double last_residual_;
};

/// A root that the analysis guarantees could not be located.
class NoRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pem
