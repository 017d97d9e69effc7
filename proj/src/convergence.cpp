#include "fpsi/convergence.hpp"

#include "fpsi/oracles.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace fpsi {

double convergence_rate(double e_prev, double e, double h_prev, double h) {
  return std::log(e_prev / e) / std::log(h_prev / h);
}

void ErrorTable::push(ErrorRow row) {
  if (!rows.empty()) {
    const ErrorRow& prev = rows.back();
    for (int i = 0; i < kNumFields; ++i) row.rate[i] = convergence_rate(prev.l2[i], row.l2[i], prev.h, row.h);
  }
  rows.push_back(std::move(row));
}

double ErrorTable::mean_rate(int i, int count) const {
  const int available = static_cast<int>(rows.size()) - 1;
  const int k = std::min(count, available);
  if (k <= 0) return NAN;
  double sum = 0.0;
  for (int r = static_cast<int>(rows.size()) - k; r < static_cast<int>(rows.size()); ++r) sum += *rows[r].rate[i];
  return sum / k;
}

bool ErrorTable::decreasing_from(int i, int from) const {
  for (std::size_t r = static_cast<std::size_t>(from) + 1; r < rows.size(); ++r)
    if (!(rows[r].l2[i] < rows[r - 1].l2[i])) return false;
  return true;
}

void write_csv(std::ostream& out, const ErrorTable& table) {
  out << "dofs,h";
  for (Field f : kTableFields) out << ",e_" << to_string(f) << ",rate_" << to_string(f);
  out << '\n';
  out << std::setprecision(10);
  for (const ErrorRow& row : table.rows) {
    out << row.dofs << ',' << row.h;
    for (int i = 0; i < kNumFields; ++i) {
      out << ',' << row.l2[i] << ',';
      if (row.rate[i]) out << *row.rate[i];
    }
    out << '\n';
  }
}

Problem manufactured_problem(int n, const PhysicalParams& params, const NitscheParams& nitsche) {
  auto mesh = std::make_shared<const Mesh>(generate_structured(n, n));
  Problem p(build_spaces(mesh), params, nitsche);
  p.sources = derive_sources(params);
  p.corrections = derive_corrections(params);
  p.dirichlet = manufactured_dirichlet();
  p.convection = true;
  return p;
}

ErrorRow manufactured_level(int n, const ConvergenceOptions& o) {
  const double h = 1.0 / n;
  const Problem problem = manufactured_problem(n, o.params, o.nitsche);
  const TimeGrid grid = TimeGrid::make(h * o.tau_per_h, o.final_time);
  const ExactSolution e = exact_solution();
  const StateVector initial = interpolate_state(problem.spaces, e.uf, e.ps, e.ur, e.pp, e.ys, e.us, 0.0);
  const RunResult result = run(problem, initial, grid, o.solver);
  const StateVector& x = result.final_state;
  const double T = grid.time(grid.steps);

  ErrorRow row;
  row.dofs = x.layout.size();
  row.h = h;
  auto put = [&](int i, const ErrorNorms& norms) {
    if (!std::isfinite(norms.l2) || !std::isfinite(norms.h1_semi)) {
      throw SolverError("level n = " + std::to_string(n) + ": non-finite error in field " +
                        to_string(kTableFields[i]));
    }
    row.l2[i] = norms.l2;
    row.h1[i] = norms.h1_semi;
  };
  put(0, error_norms(x.field(Field::Uf), e.uf, e.grad_uf, T));
  put(1, error_norms(x.field(Field::Ur), e.ur, e.grad_ur, T));
  put(2, error_norms(x.field(Field::Ps), e.ps, e.grad_ps, T));
  put(3, error_norms(x.field(Field::Pp), e.pp, e.grad_pp, T));
  put(4, error_norms(x.field(Field::Ys), e.ys, e.grad_ys, T));
  put(5, error_norms(x.field(Field::Us), e.us, e.grad_us, T));
  return row;
}

ErrorTable convergence_study(const ConvergenceOptions& o) {
  for (std::size_t i = 1; i < o.levels.size(); ++i) {
    if (o.levels[i] <= o.levels[i - 1]) throw ConfigError("convergence.levels must be strictly refining");
  }
  gate_manufactured(o.params);
  ErrorTable table;
  for (int n : o.levels) table.push(manufactured_level(n, o));
  return table;
}

}  // namespace fpsi
