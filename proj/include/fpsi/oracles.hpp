#pragma once

#include "fpsi/manufactured.hpp"

#include <cstdint>
#include <string>

namespace fpsi {

/// Outcome of comparing closed forms against an independent evaluation.
struct OracleReport {
  int points = 0;
  double max_error = 0.0;  // relative for sources, absolute for corrections
  double tolerance = 0.0;
  std::string worst_quantity;
  Vec2 worst_point = Vec2::Zero();
  double worst_time = 0.0;

  bool passed() const { return max_error <= tolerance; }
  std::string describe() const;
};

/// Strong-form residuals of the exact solution, with spatial second
/// derivatives taken by central differences (step 1e-6) of the analytic
/// gradients and time derivatives by central differences of the values.
/// Error measure |a - b| / max(|b|, 1).
OracleReport check_sources(const SourceSet& sources, const ExactSolution& exact, const PhysicalParams& params,
                           int points = 200, std::uint64_t seed = 7, double tolerance = 1e-6);

/// Defects of the five interface conditions on y = 1/2 evaluated from the
/// exact stresses. Absolute error.
OracleReport check_corrections(const InterfaceCorrections& corrections, const ExactSolution& exact,
                               const PhysicalParams& params, int points = 200, std::uint64_t seed = 11,
                               double tolerance = 1e-8);

/// Gradient and time-derivative evaluators against central differences of
/// the values, plus u_s = d_t y_s. Relative measure as for sources.
OracleReport check_exact_derivatives(const ExactSolution& exact, int points = 200, std::uint64_t seed = 3,
                                     double tolerance = 1e-6);

/// Runs all three checks; throws OracleMismatch naming the offending point.
void gate_manufactured(const PhysicalParams& params);

}  // namespace fpsi
