#pragma once

#include "fpsi/common.hpp"
#include "fpsi/mesh.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fpsi {

/// Spatially varying scalar coefficient with its gradient.
struct ScalarCoefficient {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> gradient;

  static ScalarCoefficient constant(double c);
  double operator()(const Vec2& x) const { return value(x); }
  /// True when the coefficient was built by constant().
  bool is_constant() const { return constant_; }
  double constant_value() const { return constant_value_; }

 private:
  bool constant_ = false;
  double constant_value_ = 0.0;
};

struct TensorCoefficient {
  std::function<Mat2(const Vec2&)> value;

  static TensorCoefficient constant(const Mat2& k);
  static TensorCoefficient isotropic(double k) { return constant(k * Mat2::Identity()); }
  Mat2 operator()(const Vec2& x) const { return value(x); }
};

/// Model coefficients. Defaults are the manufactured-solution set
/// (lambda = mu_p = mu_f = 10, alpha = 1, phi = 0.1, kappa = rho_f = K = 1,
/// theta = 0, rho_s = 1).
struct PhysicalParams {
  double rho_f = 1.0;
  double rho_s = 1.0;
  double mu_f = 10.0;
  double mu_p = 10.0;
  double lambda_p = 10.0;
  double bulk_modulus = 1.0;
  double alpha_bjs = 1.0;
  ScalarCoefficient phi = ScalarCoefficient::constant(0.1);
  TensorCoefficient kappa = TensorCoefficient::isotropic(1.0);
  ScalarCoefficient theta = ScalarCoefficient::constant(0.0);

  double rho_p(const Vec2& x) const {
    const double p = phi(x);
    return rho_s * (1.0 - p) + rho_f * p;
  }

  /// Checks positivity, the porosity bound 0 < phi < rho_s / (rho_s + rho_f)
  /// and SPD permeability at quadrature points of `mesh` (or at a few fixed
  /// points of the unit square when no mesh is given). Throws ConfigError
  /// naming the violated constraint. Returns warnings (e.g. theta > 0, which
  /// is not a sink).
  std::vector<std::string> validate(const Mesh* mesh = nullptr) const;

  static PhysicalParams manufactured() { return {}; }
  /// Channel-flow set: mu_f = 0.01, mu_p = 1033.6, lambda = 49364,
  /// kappa = 1e-3, K = 1e6, phi = 0.3.
  static PhysicalParams channel();
};

struct NitscheParams {
  double gamma = 40.0;
  int varsigma = 1;

  /// Throws ConfigError unless gamma > 0 and varsigma is -1, 0 or 1.
  void validate() const;
};

}  // namespace fpsi
