#include "fpsi/solver.hpp"

#include "fpsi/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace fpsi {

TimeGrid TimeGrid::make(double tau, double final_time) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("time.tau = " + std::to_string(tau) + " violates tau > 0");
  if (!(final_time >= 0.0)) {
    throw ConfigError("time.final = " + std::to_string(final_time) + " violates T >= 0");
  }
  const double ratio = final_time / tau;
  const long steps = std::lround(ratio);
  if (std::abs(steps * tau - final_time) > 1e-12 * std::max(1.0, final_time)) {
    std::ostringstream s;
    s << "time.final = " << final_time << " is not an integer multiple of time.tau = " << tau;
    throw ConfigError(s.str());
  }
  return {tau, final_time, static_cast<int>(steps)};
}

namespace {

/// Index of the first row (or column) without a single stored nonzero.
int empty_line(const Eigen::SparseMatrix<double>& A) {
  std::vector<bool> row_hit(static_cast<std::size_t>(A.rows()), false);
  for (int c = 0; c < A.outerSize(); ++c) {
    bool col_hit = false;
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it) {
      if (it.value() != 0.0) {
        col_hit = true;
        row_hit[static_cast<std::size_t>(it.row())] = true;
      }
    }
    if (!col_hit) return c;
  }
  for (std::size_t r = 0; r < row_hit.size(); ++r)
    if (!row_hit[r]) return static_cast<int>(r);
  return -1;
}

double relative_residual(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double nr = (A * x - b).norm();
  return nb > 0.0 ? nr / nb : nr;
}

}  // namespace

Eigen::VectorXd solve_linear(const SparseMatrix& A_in, const Eigen::VectorXd& b, double tolerance, double* residual) {
  if (A_in.rows() != A_in.cols() || A_in.rows() != b.size()) throw SolverError("solve_linear: dimension mismatch");
  Eigen::SparseMatrix<double> A = A_in;
  A.makeCompressed();
  if (const int line = empty_line(A); line >= 0) {
    throw SolverError("matrix is structurally singular: row/column " + std::to_string(line) + " is empty");
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) {
    throw SolverError("numerical factorization failed (singular pivot): " + lu.lastErrorMessage());
  }
  Eigen::VectorXd x = lu.solve(b);
  if (!x.allFinite()) throw SolverError("solution has non-finite entries");
  const double r = relative_residual(A, x, b);
  if (residual) *residual = r;
  if (!(r <= tolerance)) {
    std::ostringstream s;
    s << "relative residual " << r << " exceeds tolerance " << tolerance;
    throw SolverError(s.str());
  }
  return x;
}

Problem::Problem(SpaceSet s, PhysicalParams p, NitscheParams n)
    : spaces(std::move(s)), params(std::move(p)), nitsche(n), pairs(interface_pairs(*spaces.mesh, params.kappa.value)) {}

Stepper::Stepper(const Problem& problem, const TimeGrid& grid, SolverOptions options)
    : problem_(problem), grid_(grid), options_(options) {
  const SplitContributions c =
      assemble_N_static(problem.spaces, problem.params, problem.nitsche, problem.pairs);
  M_ = BlockSystem(c.M.layout, c.M).matrix;
  N_ = BlockSystem(c.N.layout, c.N).matrix;
  // The convection block lives inside the (u_f, u_f) P2 pattern already held
  // by the fluid mass; the identity keeps every diagonal slot present.
  SparseMatrix I(M_.rows(), M_.cols());
  I.setIdentity();
  zero_pattern_ = 0.0 * (M_ + N_ + I);
}

SparseMatrix Stepper::system_matrix(const StateVector& previous) const {
  SparseMatrix A = zero_pattern_ + M_ / grid_.tau + N_;
  if (problem_.convection) {
    const FieldCoefficients w = previous.field(Field::Uf);
    if (w.values.cwiseAbs().maxCoeff() > 0.0) {
      const Contributions conv = assemble_convection(problem_.spaces, w);
      SparseMatrix C(A.rows(), A.cols());
      C.setFromTriplets(conv.entries.begin(), conv.entries.end());
      A = A + C;
    }
  }
  return A;
}

bool Stepper::factorize(const SparseMatrix& A_row) {
  Eigen::SparseMatrix<double> A = A_row;
  A.makeCompressed();
  if (analyzed_nonzeros_ != A.nonZeros()) {
    lu_.analyzePattern(A);
    analyzed_nonzeros_ = A.nonZeros();
  }
  lu_.factorize(A);
  return lu_.info() == Eigen::Success;
}

StateVector Stepper::step(const StateVector& previous, int n, StepReport* report) {
  const auto start = std::chrono::steady_clock::now();
  const double t = grid_.time(n);
  const Problem& p = problem_;

  SparseMatrix A = system_matrix(previous);
  Eigen::VectorXd b = assemble_F(p.spaces, p.params, p.nitsche, p.pairs, p.sources, t,
                                 p.corrections ? &*p.corrections : nullptr);
  b += M_ * previous.values / grid_.tau;

  Constraints c = dirichlet_constraints(p.spaces, p.dirichlet, t);
  auto pin = [&](Constraints& cons) {
    // fix the first free-flow pressure dof to zero
    const int dof = BlockLayout::from(p.spaces).offset(Field::Ps);
    auto it = std::lower_bound(cons.dofs.begin(), cons.dofs.end(), dof);
    const auto pos = it - cons.dofs.begin();
    cons.dofs.insert(it, dof);
    Eigen::VectorXd v(cons.values.size() + 1);
    v << cons.values.head(pos), 0.0, cons.values.tail(cons.values.size() - pos);
    cons.values = v;
  };
  if (pinned_) pin(c);

  SparseMatrix A0 = A;
  Eigen::VectorXd b0 = b;
  eliminate(A, b, c);
  bool ok = factorize(A);
  if (!ok && options_.allow_pressure_pin && !pinned_) {
    pinned_ = true;
    pin(c);
    A = A0;
    b = b0;
    eliminate(A, b, c);
    ok = factorize(A);
  }
  if (!ok) {
    std::ostringstream s;
    s << "step " << n << " (t = " << t << "): factorization of M/tau + N failed (" << lu_.lastErrorMessage()
      << "); check that nitsche.gamma is large enough or pin a pressure dof";
    throw SolverError(s.str());
  }
  Eigen::VectorXd x = lu_.solve(b);
  if (!x.allFinite()) {
    throw SolverError("step " + std::to_string(n) + ": solution has non-finite entries");
  }
  const Eigen::SparseMatrix<double> Ac = A;
  const double r = relative_residual(Ac, x, b);
  if (!(r <= options_.tolerance)) {
    std::ostringstream s;
    s << "step " << n << ": relative residual " << r << " exceeds tolerance " << options_.tolerance;
    throw SolverError(s.str());
  }
  if (report) {
    report->step = n;
    report->time = t;
    report->residual = r;
    report->status = pinned_ ? "ok (p^S pinned)" : "ok";
    report->wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return StateVector(p.spaces, std::move(x), t);
}

RunResult run(const Problem& problem, const StateVector& initial, const TimeGrid& grid, SolverOptions options,
              const StepObserver& observer) {
  RunResult result{initial, {discrete_energy(initial, problem.params)}, {}};
  if (observer) observer(initial, 0);
  if (grid.steps == 0) return result;
  Stepper stepper(problem, grid, options);
  for (int n = 1; n <= grid.steps; ++n) {
    StepReport report;
    result.final_state = stepper.step(result.final_state, n, &report);
    result.reports.push_back(report);
    result.energy.push_back(discrete_energy(result.final_state, problem.params));
    if (observer) observer(result.final_state, n);
  }
  return result;
}

StateVector interpolate_state(const SpaceSet& spaces, const VectorFunction& uf, const ScalarFunction& ps,
                              const VectorFunction& ur, const ScalarFunction& pp, const VectorFunction& ys,
                              const VectorFunction& us, double t) {
  StateVector s(spaces, t);
  if (uf) s.set(Field::Uf, interpolate(spaces.ptr(Field::Uf), uf, t));
  if (ps) s.set(Field::Ps, interpolate(spaces.ptr(Field::Ps), ps, t));
  if (ur) s.set(Field::Ur, interpolate(spaces.ptr(Field::Ur), ur, t));
  if (pp) s.set(Field::Pp, interpolate(spaces.ptr(Field::Pp), pp, t));
  if (ys) s.set(Field::Ys, interpolate(spaces.ptr(Field::Ys), ys, t));
  if (us) s.set(Field::Us, interpolate(spaces.ptr(Field::Us), us, t));
  return s;
}

double discrete_energy(const StateVector& state, const PhysicalParams& params) {
  const Mesh& mesh = *state.spaces.mesh;
  const auto& rule = quadrature_rule(Entity::Triangle, 4);
  const FieldCoefficients uf = state.field(Field::Uf), us = state.field(Field::Us), ur = state.field(Field::Ur);
  const FieldCoefficients pp = state.field(Field::Pp), ys = state.field(Field::Ys);
  double e = 0.0;
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellGeometry g(mesh, cell);
    const bool fluid = mesh.cells()[cell].subdomain == Subdomain::Fluid;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * 2.0 * g.area;
      const ShapeValues s1 = shape_functions(1, rule.points[q], g);
      const ShapeValues s2 = shape_functions(2, rule.points[q], g);
      if (fluid) {
        e += w * params.rho_f * evaluate_vector(uf, cell, s2).squaredNorm();
        continue;
      }
      const Vec2 x = g.map(rule.points[q]);
      const double phi = params.phi(x);
      const Vec2 vs = evaluate_vector(us, cell, s1);
      const Vec2 w_rel = evaluate_vector(ur, cell, s2) + vs;
      const double p = evaluate_scalar(pp, cell, s1);
      const Mat2 gy = evaluate_vector_gradient(ys, cell, s2);
      const Mat2 eps = 0.5 * (gy + gy.transpose());
      e += w * (params.rho_s * (1.0 - phi) * vs.squaredNorm() +
                (1.0 - phi) * (1.0 - phi) / params.bulk_modulus * p * p + params.rho_f * phi * w_rel.squaredNorm() +
                2.0 * params.mu_p * eps.squaredNorm() + params.lambda_p * gy.trace() * gy.trace());
    }
  }
  return 0.5 * e;
}

}  // namespace fpsi
