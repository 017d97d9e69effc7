#pragma once

#include "fpsi/dirichlet.hpp"
#include "fpsi/forms.hpp"

namespace fpsi {

/// Closed-form fields of the two-subdomain convergence test with k = 4 pi:
///   u_f = u_s = t x^3 (cos ky, -2 sin ky),  p^S = p^P = t^2 (1 - sin kx sin ky),
///   u_r = (t^2 sin^2 ky - t x^3 cos ky, t^2 sin^2 ky + 2 t x^3 sin ky),
///   y_s = t^2 x^3 (cos ky / 2, -sin ky).
struct ExactSolution {
  VectorFunction uf, ur, ys, us;
  ScalarFunction ps, pp;
  VectorGradient grad_uf, grad_ur, grad_ys, grad_us;
  ScalarGradient grad_ps, grad_pp;
  VectorFunction dt_uf, dt_ur, dt_ys, dt_us;
  ScalarFunction dt_ps, dt_pp;
};

ExactSolution exact_solution();

/// Loads obtained by substituting the exact solution into the strong
/// equations. Requires constant porosity (throws otherwise); kappa and theta
/// are evaluated pointwise.
SourceSet derive_sources(const PhysicalParams& params);

/// Interface defects on the horizontal interface y = 1/2 with
/// n_S = (0, 1), n_P = (0, -1), tau = (1, 0).
InterfaceCorrections derive_corrections(const PhysicalParams& params);

/// Exact u_f, u_r and y_s as essential data.
DirichletData manufactured_dirichlet();

}  // namespace fpsi
