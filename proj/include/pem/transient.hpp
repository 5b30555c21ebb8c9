#pragma once

// Moving-boundary integrator for the radially symmetric ring / annulus
// problem. The domain r in [r_in, S(t)] is mapped to xi in [0, 1] by
// r = r_in + (S - r_in) xi, with r_in = r0 for the annulus and 0 for the
// disc, so the grid is fixed in xi and moves in r.
//
// Each step solves the pressure / displacement pair implicitly for a trial
// boundary position S, and S itself from the traction condition at r = S
// (the displacement condition w(S) = S - R0 is imposed as Dirichlet data).
// Density and porosity are then transported with implicit upwinding and an
// exact exponential treatment of their relaxation terms.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "pem/errors.hpp"
#include "pem/field.hpp"
#include "pem/params.hpp"
#include "pem/residuals.hpp"

namespace pem {

enum class Geometry { circle, annulus };
enum class TractionForm { ring, annulus };

std::string geometry_name(Geometry g);
std::string traction_form_name(TractionForm f);

struct RadialState {
  Geometry geometry = Geometry::annulus;
  double r_in = 0.0;
  double t = 0.0;
  double S = 0.0;
  double dSdt = 0.0;
  std::vector<double> xi;
  std::vector<double> w, P, varrho, Theta;
  /// Time derivatives at fixed r.
  std::vector<double> w_t, P_t, varrho_t, Theta_t;
  /// Max |ring residual| per equation over interior sample radii, evaluated
  /// on the time window ending at this state; zero until enough history.
  std::array<double, kRingEquationCount> ring_residual{};

  int cells() const { return static_cast<int>(xi.size()) - 1; }
  double r(int i) const { return r_in + (S - r_in) * xi[i]; }
  double h() const { return (S - r_in) / cells(); }
  /// Largest magnitude among the time derivatives and dS/dt.
  double rate_norm() const;
};

struct SimConfig {
  int N = 200;                ///< grid cells, >= 16
  double dt = 1e-4;           ///< initial step
  double dt_max = 0.05;
  double dt_min = 1e-12;
  double dt_growth = 1.2;     ///< factor applied after each accepted step
  double t_end = 20.0;
  bool quasi_static = true;
  double steady_tol = 1e-10;  ///< rate_norm threshold for steady state
  bool stop_at_steady = true;
  double load_ramp = 0.0;     ///< linear ramp time; 0 is a step load
  double load_off_time = -1.0;  ///< load removed at this time; < 0 never
  TractionForm traction = TractionForm::annulus;
  double output_interval = 0.0;  ///< snapshot spacing; 0 stores none but the last
  int max_steps = 1000000;

  /// Throws ParameterError naming every violated restriction.
  void validate() const;
};

/// Initial density and porosity. Empty members take the defaults
/// varrho0 = rho_f0 (1 + 1e-7) and Theta0 = 1 - 1e-7: small offsets from the
/// relaxed state, since the relaxation terms amplify rho_f0 - varrho and
/// 1 - Theta by up to about e^12.5 under a step load.
struct InitialProfiles {
  std::function<double(double r)> varrho;
  std::function<double(double r)> theta;

  /// Copy with empty members replaced by the defaults for `params`.
  InitialProfiles resolved(const ModelParams& params) const;
};

struct TrajectoryRecord {
  double t = 0.0;
  double S = 0.0;
  double dt = 0.0;
  double w_boundary = 0.0;
  double P_center = 0.0;  ///< P at r = 0 for the disc, mid-radius for the annulus
  double rate_norm = 0.0;
  double volume_balance = 0.0;
  std::array<double, kRingEquationCount> ring_residual{};
};

struct SimResult {
  std::vector<TrajectoryRecord> trajectory;  ///< one record per accepted step, plus t = 0
  std::vector<RadialState> snapshots;        ///< at output_interval spacing
  RadialState final_state;
  bool steady = false;
  int accepted_steps = 0;
  int rejected_steps = 0;
};

/// Solver failure that left the state outside physical bounds or without a
/// converged boundary position even at the minimum step.
class SimulationAborted : public SolverError {
 public:
  SimulationAborted(const std::string& what, int iterations, double last_residual,
                    RadialState state)
      : SolverError(what, iterations, last_residual), state_(std::move(state)) {}
  const RadialState& state() const { return state_; }

 private:
  RadialState state_;
};

/// Load at time t: F0 ramped over load_ramp and switched off at load_off_time.
double load_at(const ModelParams& params, const SimConfig& config, double t);

/// Initial state: w = 0, P = p_a, S = R0.
RadialState initial_state(const ModelParams& params, const SimConfig& config, Geometry geometry,
                          const InitialProfiles& initial = {});

/// Integrates from initial_state to t_end (or to steady state).
SimResult simulate(const ModelParams& params, const SimConfig& config, Geometry geometry,
                   const InitialProfiles& initial = {});

/// Discrete traction residual at r = S for the state's w, with the same
/// one-sided derivative the solver uses.
double traction_residual(const RadialState& state, const ModelParams& params, double load,
                         TractionForm form);

struct SteadyReport {
  bool is_steady = false;
  double rate_norm = 0.0;
  double distance_w = 0.0;  ///< sup |w - w_exact| at the nodes
  double distance_P = 0.0;  ///< sup |P - p_a|
};

/// Compares a state against the stationary solution with P = p_a and the
/// current boundary position (distances are computed only when steady).
SteadyReport steady_state_check(const RadialState& state, const ModelParams& params,
                                double steady_tol);

/// Stationary state at boundary position S on an N-cell grid.
RadialState stationary_state(const ModelParams& params, Geometry geometry, int N, double S,
                             const InitialProfiles& profiles = {});

/// Time derivative at fixed r of a nodal profile on a moving grid:
/// (f_now - f_before) / dt - r_dot * df/dr, with r_dot the node velocity.
std::vector<double> ale_time_derivative(const std::vector<double>& now,
                                        const std::vector<double>& before,
                                        const std::vector<double>& r_now,
                                        const std::vector<double>& r_before, double dt);

struct VolumeBalance {
  double dilatation_rate;  ///< [r w_t] across the domain
  double pressure_flux;    ///< (k/2) [r P_r] across the domain
  double defect() const { return dilatation_rate - pressure_flux; }
};

/// Integral of the continuity equation over the domain.
VolumeBalance volume_balance(const RadialState& state, const ModelParams& params);

/// Radial field (t, r) interpolating a short history of states: spatial
/// derivatives from nodal stencils, time derivatives from the Lagrange
/// polynomial through the levels at fixed r. u2 and c are identically zero
/// and phi derivatives vanish.
class RadialWindowField : public FieldSource {
 public:
  explicit RadialWindowField(std::vector<RadialState> states);
  double value(Var v, const Point& at, const DerivIndex& d = {}) const override;

 private:
  double spatial(int level, Var v, double r, int order) const;
  std::vector<RadialState> states_;
  std::vector<std::vector<double>> radii_;
};

}  // namespace pem
