#pragma once

#include "fpsi/manufactured.hpp"
#include "fpsi/solver.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

namespace fpsi {

/// Column order of the error table: u_f, u_r, p^S, p^P, y_s, u_s.
inline constexpr std::array<Field, kNumFields> kTableFields{Field::Uf, Field::Ur, Field::Ps,
                                                           Field::Pp, Field::Ys, Field::Us};

struct ErrorRow {
  int dofs = 0;
  double h = 0.0;
  std::array<double, kNumFields> l2{};  // in kTableFields order
  std::array<double, kNumFields> h1{};
  std::array<std::optional<double>, kNumFields> rate{};  // L2 rates; none on the first row
};

struct ErrorTable {
  std::vector<ErrorRow> rows;

  /// Appends a row and fills its rates from the previous one.
  void push(ErrorRow row);
  /// Mean L2 rate of column `i` over the last `count` refinements.
  double mean_rate(int i, int count = 3) const;
  /// Errors of column `i` strictly decrease from row `from` (0-based) on.
  bool decreasing_from(int i, int from = 1) const;
};

/// log(e_prev / e) / log(h_prev / h).
double convergence_rate(double e_prev, double e, double h_prev, double h);

/// Header `dofs,h,e_uf,rate_uf,...`; missing rates are left empty.
void write_csv(std::ostream& out, const ErrorTable& table);

struct ConvergenceOptions {
  std::vector<int> levels{2, 4, 8, 16, 32};  // n for an n-by-n grid of the unit square, h = 1/n
  PhysicalParams params = PhysicalParams::manufactured();
  NitscheParams nitsche{};
  double tau_per_h = 1e-3;
  double final_time = 1e-3;
  SolverOptions solver{};
};

/// Final-time errors of the manufactured problem on each level; the source
/// and correction oracles gate the study. NaN errors abort with SolverError.
ErrorTable convergence_study(const ConvergenceOptions& options);

/// One level of the study; exposed for tests and timing.
ErrorRow manufactured_level(int n, const ConvergenceOptions& options);

/// Problem for the manufactured solution on an n-by-n grid of the unit square.
Problem manufactured_problem(int n, const PhysicalParams& params, const NitscheParams& nitsche);

}  // namespace fpsi
