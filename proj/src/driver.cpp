#include "fpsi/driver.hpp"

#include "fpsi/oracles.hpp"
#include "fpsi/vtk.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace fpsi {

BoundaryRule channel_boundary_rule(double x_max) {
  return [x_max](const Vec2& midpoint, const Vec2& normal, Subdomain side) {
    const bool outlet = normal.x() > 0.5 && std::abs(midpoint.x() - x_max) < 1e-12 * std::max(1.0, x_max);
    if (side == Subdomain::Fluid) return outlet ? FacetTag::FluidOutflow : FacetTag::FluidWall;
    return outlet ? FacetTag::PoroNeumann : FacetTag::PoroDirichlet;
  };
}

VectorFunction channel_inflow() {
  return [](const Vec2& x, double) { return Vec2(0.1 * (x.y() + 0.2) * (1.2 - x.y()) / 0.49, 0.0); };
}

std::shared_ptr<const Mesh> build_mesh(const MeshSource& s) {
  switch (s.kind) {
    case MeshSource::Kind::UnitSquare:
      return std::make_shared<const Mesh>(generate_structured(s.nx, s.ny));
    case MeshSource::Kind::Channel:
      return std::make_shared<const Mesh>(generate_structured(
          s.nx, s.ny, StructuredGeometry::channel(s.length, s.y_min, s.y_max, s.layer), channel_boundary_rule(s.length)));
    case MeshSource::Kind::File:
      return std::make_shared<const Mesh>(import_msh(s.file, s.tags));
  }
  throw Error("unknown mesh source");
}

Problem build_problem(const RunConfig& c) {
  auto mesh = build_mesh(c.mesh);
  c.params.validate(mesh.get());
  Problem p(build_spaces(mesh), c.params, c.nitsche);
  p.convection = c.convection;
  if (c.mode == RunMode::Manufactured) {
    p.sources = derive_sources(c.params);
    p.corrections = derive_corrections(c.params);
    p.dirichlet = manufactured_dirichlet();
    return p;
  }
  VectorFunction f_s, f_p;
  if (c.body_force_fluid) f_s = [f = *c.body_force_fluid](const Vec2&, double) { return f; };
  if (c.body_force_poro) f_p = [f = *c.body_force_poro](const Vec2&, double) { return f; };
  p.sources = SourceSet::general(c.params, f_s, f_p);
  if (c.inflow == "channel") {
    const VectorFunction in = channel_inflow();
    p.dirichlet = {in, in, in};
  }
  return p;
}

StateVector initial_state(const Problem& p, const RunConfig& c) {
  if (c.initial == "exact") {
    const ExactSolution e = exact_solution();
    return interpolate_state(p.spaces, e.uf, e.ps, e.ur, e.pp, e.ys, e.us, 0.0);
  }
  StateVector x(p.spaces, 0.0);
  if (c.initial == "random") {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : x.values) v = u(rng);
  }
  const Constraints cons = dirichlet_constraints(p.spaces, p.dirichlet, 0.0);
  for (std::size_t i = 0; i < cons.dofs.size(); ++i) x.values[cons.dofs[i]] = cons.values[static_cast<Eigen::Index>(i)];
  return x;
}

RateVerdict judge_rates(const ErrorTable& table, double min_rate_velocity, double min_rate_pressure) {
  RateVerdict v;
  for (int i = 0; i < kNumFields; ++i) {
    const Field f = kTableFields[i];
    const bool pressure = f == Field::Ps || f == Field::Pp;
    const double threshold = pressure ? min_rate_pressure : min_rate_velocity;
    const double rate = table.mean_rate(i, 3);
    std::ostringstream s;
    if (!(rate >= threshold)) {
      s << to_string(f) << ": mean L2 rate " << rate << " < " << threshold;
      v.failures.push_back(s.str());
    }
    if (!table.decreasing_from(i, 1)) v.failures.push_back(std::string(to_string(f)) + ": errors not decreasing");
  }
  v.passed = v.failures.empty();
  return v;
}

void ensure_writable(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output.dir: cannot create '" + dir.string() + "': " + ec.message());
  const auto probe = dir / ".fpsi_write_probe";
  {
    std::ofstream out(probe);
    if (!(out << "probe")) throw ConfigError("output.dir: '" + dir.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

int cmd_convergence(const RunConfig& c, std::ostream& log) {
  ensure_writable(c.output_dir);
  ConvergenceOptions o;
  o.levels = c.levels;
  o.params = c.params;
  o.nitsche = c.nitsche;
  o.tau_per_h = c.tau_per_h;
  o.final_time = c.final_time;
  o.solver.tolerance = c.solver_tolerance;

  gate_manufactured(o.params);
  log << "oracles: sources and interface corrections agree\n";
  ErrorTable table;
  for (int n : o.levels) {
    table.push(manufactured_level(n, o));
    const ErrorRow& r = table.rows.back();
    log << "h = 1/" << n << "  dofs = " << r.dofs;
    for (int i = 0; i < kNumFields; ++i) log << "  e_" << to_string(kTableFields[i]) << " = " << r.l2[i];
    log << '\n';
  }
  const auto csv = c.output_dir / "convergence.csv";
  std::ofstream out(csv);
  write_csv(out, table);
  if (!out) throw Error("cannot write '" + csv.string() + "'");
  log << "wrote " << csv.string() << '\n';

  if (table.rows.size() < 2) return kExitOk;
  const RateVerdict v = judge_rates(table, c.min_rate_velocity, c.min_rate_pressure);
  for (const auto& f : v.failures) log << "FAIL " << f << '\n';
  return v.passed ? kExitOk : kExitAcceptance;
}

int cmd_run(const RunConfig& c, std::ostream& log) {
  ensure_writable(c.output_dir);
  const Problem problem = build_problem(c);
  const TimeGrid grid = TimeGrid::make(c.tau, c.final_time);
  StateVector previous = initial_state(problem, c);
  SolverOptions options;
  options.tolerance = c.solver_tolerance;

  int files = 0;
  std::optional<StateVector> before_last;
  const RunResult result = run(problem, previous, grid, options, [&](const StateVector& x, int n) {
    if (n == grid.steps - 1) before_last = x;
    if (c.dump_every > 0 && n % c.dump_every == 0) {
      std::ostringstream name;
      name << "state_" << std::setw(5) << std::setfill('0') << n << ".vtk";
      write_vtk(*problem.spaces.mesh, sample_state(x), c.output_dir / name.str());
      ++files;
    }
  });

  const auto summary = c.output_dir / "run_summary.csv";
  std::ofstream out(summary);
  out << std::setprecision(12) << "step,time,energy,residual\n";
  out << 0 << ',' << 0.0 << ',' << result.energy[0] << ",\n";
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const StepReport& r = result.reports[i];
    out << r.step << ',' << r.time << ',' << result.energy[i + 1] << ',' << r.residual << '\n';
  }
  if (!out) throw Error("cannot write '" + summary.string() + "'");

  const StateVector& x = result.final_state;
  if (!x.values.allFinite()) throw SolverError("final state has non-finite entries");
  log << "steps = " << grid.steps << "  dofs = " << x.layout.size() << "  T = " << x.time << '\n';
  for (Field f : kAllFields) log << "  max |" << to_string(f) << "| = " << x.segment(f).cwiseAbs().maxCoeff() << '\n';
  log << "  energy = " << result.energy.back() << '\n';
  if (before_last) {
    log << "  interface jump seminorm = " << interface_jump_seminorm(x, *before_last, grid.tau, problem.pairs) << '\n';
  }
  if (c.mode == RunMode::Manufactured) {
    const ExactSolution e = exact_solution();
    const double T = x.time;
    log << "  L2 errors: uf " << error_norms(x.field(Field::Uf), e.uf, e.grad_uf, T).l2 << "  ur "
        << error_norms(x.field(Field::Ur), e.ur, e.grad_ur, T).l2 << "  ps "
        << error_norms(x.field(Field::Ps), e.ps, e.grad_ps, T).l2 << "  pp "
        << error_norms(x.field(Field::Pp), e.pp, e.grad_pp, T).l2 << "  ys "
        << error_norms(x.field(Field::Ys), e.ys, e.grad_ys, T).l2 << "  us "
        << error_norms(x.field(Field::Us), e.us, e.grad_us, T).l2 << '\n';
  }
  log << "wrote " << summary.string() << " and " << files << " VTK file(s)\n";
  return kExitOk;
}

int cmd_energy_check(const RunConfig& c, std::ostream& log) {
  if (c.mode != RunMode::General) throw ConfigError("mode: energy-check needs mode = general (zero forcing)");
  if (c.body_force_fluid || c.body_force_poro) throw ConfigError("forcing.*: energy-check needs zero forcing");
  if (c.inflow != "none") throw ConfigError("flow.inflow: energy-check needs homogeneous boundary data");
  if (c.convection) throw ConfigError("flow.convection: energy-check needs convection disabled");
  if (c.initial != "random") throw ConfigError("initial.state: energy-check needs a nonzero (random) initial state");
  if (!c.params.theta.is_constant() || c.params.theta.constant_value() != 0.0) {
    throw ConfigError("physics.theta: energy-check needs theta = 0");
  }
  ensure_writable(c.output_dir);

  const Problem problem = build_problem(c);
  const TimeGrid grid = TimeGrid::make(c.tau, c.final_time);
  SolverOptions options;
  options.tolerance = c.solver_tolerance;
  const RunResult result = run(problem, initial_state(problem, c), grid, options);

  const auto path = c.output_dir / "energy.csv";
  std::ofstream out(path);
  out << std::setprecision(17) << "step,time,energy\n";
  for (std::size_t n = 0; n < result.energy.size(); ++n) out << n << ',' << grid.time(static_cast<int>(n)) << ',' << result.energy[n] << '\n';
  if (!out) throw Error("cannot write '" + path.string() + "'");

  const double slack = c.energy_slack * result.energy.front();
  double worst = -INFINITY;
  int worst_step = 0;
  for (std::size_t n = 1; n < result.energy.size(); ++n) {
    const double rise = result.energy[n] - result.energy[n - 1];
    if (rise > worst) {
      worst = rise;
      worst_step = static_cast<int>(n);
    }
  }
  log << "E0 = " << result.energy.front() << "  E_N = " << result.energy.back() << "  steps = " << grid.steps << '\n';
  if (grid.steps == 0 || worst <= slack) {
    log << "energy non-increasing (largest step change " << worst << ", slack " << slack << ")\n";
    return kExitOk;
  }
  log << "FAIL energy rose by " << worst << " at step " << worst_step << " (slack " << slack << ")\n";
  return kExitAcceptance;
}

}  // namespace fpsi
