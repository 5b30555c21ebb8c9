#pragma once

// Flat key = value run configuration shared by every pem_sim subcommand.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pem/params.hpp"
#include "pem/stationary.hpp"
#include "pem/transient.hpp"

namespace pem::cli {

/// Malformed configuration text, unknown key, bad value or unusable path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SymmetrySource { stationary, polynomial };
enum class SweepTarget { rst, transient };

struct SymmetryOptions {
  SymmetrySource source = SymmetrySource::stationary;
  /// Element names: time_translation, x_translation, y_translation,
  /// rotation (angle epsilon), quarter_turn, concentration_scaling,
  /// pressure_shift, displacement_shift, broken_displacement (G = (x^2, 0)).
  std::vector<std::string> elements{"pressure_shift", "displacement_shift",
                                    "concentration_scaling", "quarter_turn",
                                    "broken_displacement"};
  double epsilon = 0.3;
  int harmonic_degree = 3;
  unsigned long long seed = 1;
  int poly_degree = 3;
  double tolerance = 1e-12;
  int points = 5;  ///< samples per axis
};

struct SweepOptions {
  std::string param = "F0";
  std::vector<double> values;
  SweepTarget target = SweepTarget::rst;
};

struct RunConfig {
  ModelParams params;
  SimConfig sim;
  Geometry geometry = Geometry::annulus;
  StationaryCase stationary_case = StationaryCase::neumann;
  double r_st = 0.0;  ///< <= 0 selects the computed steady radius
  int samples = 101;
  bool svg = false;
  std::filesystem::path out = ".";
  std::optional<double> initial_varrho;
  std::optional<double> initial_theta;
  SymmetryOptions symmetry;
  SweepOptions sweep;
};

/// Every recognised key, in a stable order.
const std::vector<std::string>& config_keys();

/// Sets one key; throws ConfigError for unknown keys or bad values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parses "key = value" lines; '#' starts a comment. Later lines win.
void apply_text(RunConfig& config, const std::string& text, const std::string& origin);

/// Reads and applies a configuration file.
void apply_file(RunConfig& config, const std::filesystem::path& path);

/// Validates parameters and solver settings; throws ConfigError listing
/// every problem.
void validate(const RunConfig& config);

/// Number with an optional "pi" factor: "2.5", "16*pi", "16pi", "pi".
double parse_number(const std::string& text);

/// Creates the output directory and checks it is writable.
void prepare_output(const RunConfig& config);

InitialProfiles initial_profiles(const RunConfig& config);

std::string symmetry_source_name(SymmetrySource s);
std::string sweep_target_name(SweepTarget t);

}  // namespace pem::cli
