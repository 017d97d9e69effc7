#pragma once

#include "fpsi/config.hpp"
#include "fpsi/convergence.hpp"
#include "fpsi/solver.hpp"

#include <iosfwd>
#include <memory>

namespace fpsi {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitAcceptance = 1, kExitConfig = 2, kExitSolver = 3 };

/// Outlet (x = x_max) facets get the do-nothing tags; every other external
/// facet is essential.
BoundaryRule channel_boundary_rule(double x_max);

/// Parabolic inflow 0.1 (y + 0.2)(1.2 - y) / 0.49 in x, zero in y.
VectorFunction channel_inflow();

std::shared_ptr<const Mesh> build_mesh(const MeshSource& source);

/// Spaces, loads and essential data for a configuration.
Problem build_problem(const RunConfig& config);

/// Initial state per `config.initial`; random states take the essential
/// values on constrained dofs.
StateVector initial_state(const Problem& problem, const RunConfig& config);

struct RateVerdict {
  bool passed = true;
  std::vector<std::string> failures;
};

/// Mean L2 rate over the last three refinements against the velocity and
/// pressure thresholds, and monotone errors from the second level on.
RateVerdict judge_rates(const ErrorTable& table, double min_rate_velocity, double min_rate_pressure);

/// Creates `dir` and checks that a file can be written there.
void ensure_writable(const std::filesystem::path& dir);

int cmd_convergence(const RunConfig& config, std::ostream& log);
int cmd_run(const RunConfig& config, std::ostream& log);
int cmd_energy_check(const RunConfig& config, std::ostream& log);

}  // namespace fpsi
