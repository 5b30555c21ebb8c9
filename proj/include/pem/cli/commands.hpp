#pragma once

// pem_sim subcommands. Each one reads a validated RunConfig, writes its
// result files into config.out and a short summary to `out`. Failures are
// reported by exception; run_cli maps them to exit codes.

#include <ostream>
#include <string>
#include <vector>

#include "pem/cli/config.hpp"

namespace pem::cli {

/// profiles.csv (r, P, w, tau11, tau22) at `samples` radii on [r0, r_st];
/// profiles.svg when svg is on.
void cmd_stationary(const RunConfig& config, std::ostream& out);

/// Steady-radius report on stdout and a one-row rst.csv.
void cmd_rst(const RunConfig& config, std::ostream& out);

/// trajectory.csv, final_profile.csv and, with output_interval > 0,
/// snapshots.csv. An aborted run writes diagnostic_state.csv and rethrows.
void cmd_transient(const RunConfig& config, std::ostream& out);

/// symmetry.csv with one row per (element, equation).
void cmd_symmetry(const RunConfig& config, std::ostream& out);

/// Runs the rst or transient target at every sweep value in parallel and
/// writes rst.csv or sweep.csv in sweep-value order.
void cmd_sweep(const RunConfig& config, std::ostream& out);

/// Worker count for sweeps: hardware concurrency, capped by PEM_SIM_THREADS
/// and by the number of points.
unsigned sweep_threads(std::size_t points);

const std::vector<std::string>& rst_columns();
const std::vector<std::string>& trajectory_columns();
const std::vector<std::string>& symmetry_columns();

}  // namespace pem::cli
