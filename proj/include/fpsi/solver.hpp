#pragma once

#include "fpsi/dirichlet.hpp"
#include "fpsi/forms.hpp"

#include <Eigen/SparseLU>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fpsi {

/// Uniform grid t_n = n tau, 0 <= n <= steps.
struct TimeGrid {
  double tau = 1e-3;
  double final_time = 0.0;
  int steps = 0;

  /// Throws unless tau > 0 and final_time / tau is an integer to 1e-12.
  static TimeGrid make(double tau, double final_time);
  double time(int n) const { return n * tau; }
};

struct SolverOptions {
  double tolerance = 1e-9;  // on ||Ax - b|| / ||b||
  bool allow_pressure_pin = true;
};

struct StepReport {
  int step = 0;
  double time = 0.0;
  double residual = 0.0;
  std::string status = "ok";  // "ok" or "ok (p^S pinned)"
  double wall_seconds = 0.0;
};

/// Direct solve of a square system. Throws SolverError that distinguishes a
/// structurally singular matrix (an empty row or column) from a failed
/// numerical factorization, and rejects residuals above `tolerance`.
Eigen::VectorXd solve_linear(const SparseMatrix& A, const Eigen::VectorXd& b, double tolerance = 1e-9,
                             double* residual = nullptr);

/// Everything that defines one time-dependent problem.
struct Problem {
  SpaceSet spaces;
  PhysicalParams params;
  NitscheParams nitsche;
  std::vector<InterfaceFacetPair> pairs;
  SourceSet sources;
  std::optional<InterfaceCorrections> corrections;
  DirichletData dirichlet;
  bool convection = true;

  /// Builds pairs from the mesh and the permeability.
  Problem(SpaceSet spaces, PhysicalParams params, NitscheParams nitsche);
};

/// Backward Euler for M dx/dt + N x = F. M and the static part of N are
/// assembled once; the convection block is refreshed from u_f^{n-1}. The
/// sparsity pattern of (M/tau + N) is frozen after the first step so the
/// symbolic factorization is reused.
class Stepper {
 public:
  Stepper(const Problem& problem, const TimeGrid& grid, SolverOptions options = {});

  /// Advances `previous` (stamped t_{n-1}) to t_n.
  StateVector step(const StateVector& previous, int n, StepReport* report = nullptr);

  const SparseMatrix& mass() const { return M_; }

 private:
  SparseMatrix system_matrix(const StateVector& previous) const;
  bool factorize(const SparseMatrix& A);

  const Problem& problem_;
  TimeGrid grid_;
  SolverOptions options_;
  SparseMatrix M_;
  SparseMatrix N_;
  SparseMatrix zero_pattern_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  Eigen::Index analyzed_nonzeros_ = -1;
  bool pinned_ = false;
};

struct RunResult {
  StateVector final_state;
  std::vector<double> energy;  // at t_0 ... t_N
  std::vector<StepReport> reports;
};

using StepObserver = std::function<void(const StateVector& state, int n)>;

/// Runs all steps of `grid` from `initial` (observer sees n = 0 too).
RunResult run(const Problem& problem, const StateVector& initial, const TimeGrid& grid, SolverOptions options = {},
              const StepObserver& observer = {});

/// Interpolants of the exact fields at t = 0 (each field independently).
StateVector interpolate_state(const SpaceSet& spaces, const VectorFunction& uf, const ScalarFunction& ps,
                              const VectorFunction& ur, const ScalarFunction& pp, const VectorFunction& ys,
                              const VectorFunction& us, double t);

/// 1/2 [rho_f |u_f|^2 + rho_s (1-phi) |u_s|^2 + (1-phi)^2/K |p^P|^2
///      + rho_f phi |u_r + u_s|^2 + 2 mu_p |eps(y_s)|^2 + lambda |div y_s|^2].
double discrete_energy(const StateVector& state, const PhysicalParams& params);

}  // namespace fpsi
