#include "fpsi/params.hpp"

#include "fpsi/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace fpsi {

ScalarCoefficient ScalarCoefficient::constant(double c) {
  ScalarCoefficient s;
  s.value = [c](const Vec2&) { return c; };
  s.gradient = [](const Vec2&) { return Vec2::Zero().eval(); };
  s.constant_ = true;
  s.constant_value_ = c;
  return s;
}

TensorCoefficient TensorCoefficient::constant(const Mat2& k) {
  return {[k](const Vec2&) { return k; }};
}

PhysicalParams PhysicalParams::channel() {
  PhysicalParams p;
  p.mu_f = 0.01;
  p.rho_f = 1.0;
  p.rho_s = 1.0;
  p.mu_p = 1.0336e3;
  p.lambda_p = 4.9364e4;
  p.kappa = TensorCoefficient::isotropic(1e-3);
  p.bulk_modulus = 1e6;
  p.theta = ScalarCoefficient::constant(0.0);
  p.alpha_bjs = 1.0;
  p.phi = ScalarCoefficient::constant(0.3);
  return p;
}

namespace {

std::string num(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

void require_positive(double v, const char* key, const char* symbol) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(key) + " = " + num(v) + " violates " + symbol + " > 0");
  }
}

}  // namespace

std::vector<std::string> PhysicalParams::validate(const Mesh* mesh) const {
  require_positive(rho_f, "physics.rho_f", "rho_f");
  require_positive(rho_s, "physics.rho_s", "rho_s");
  require_positive(mu_f, "physics.mu_f", "mu_f");
  require_positive(mu_p, "physics.mu_p", "mu_p");
  require_positive(lambda_p, "physics.lambda_p", "lambda_p");
  require_positive(bulk_modulus, "physics.K", "K");
  if (!(alpha_bjs >= 0.0)) {
    throw ConfigError("physics.alpha_bjs = " + num(alpha_bjs) + " violates alpha_BJS >= 0");
  }

  std::vector<Vec2> samples;
  if (mesh) {
    const auto& rule = quadrature_rule(Entity::Triangle, 2);
    for (int c = 0; c < mesh->num_cells(); ++c) {
      if (mesh->cells()[c].subdomain != Subdomain::Poro) continue;
      const auto& v = mesh->cells()[c].vertices;
      for (const auto& l : rule.points) {
        samples.push_back(l[0] * mesh->vertices()[v[0]] + l[1] * mesh->vertices()[v[1]] +
                          l[2] * mesh->vertices()[v[2]]);
      }
    }
  } else {
    for (double x : {0.0, 0.5, 1.0}) {
      for (double y : {0.0, 0.5, 1.0}) samples.emplace_back(x, y);
    }
  }

  const double phi_max = rho_s / (rho_s + rho_f);
  std::vector<std::string> warnings;
  bool warned_theta = false;
  for (const Vec2& x : samples) {
    const double p = phi(x);
    if (!(p > 0.0) || !(p < phi_max)) {
      throw ConfigError("physics.phi = " + num(p) + " at (" + num(x.x()) + ", " + num(x.y()) +
                        ") violates the porosity bound 0 < phi < rho_s/(rho_s+rho_f) = " + num(phi_max));
    }
    const Mat2 k = kappa(x);
    if (std::abs(k(0, 1) - k(1, 0)) > 1e-12 * k.norm()) {
      throw ConfigError("physics.kappa violates symmetry kappa_xy = kappa_yx");
    }
    const Eigen::SelfAdjointEigenSolver<Mat2> eig(k);
    if (!(eig.eigenvalues().minCoeff() > 0.0)) {
      throw ConfigError("physics.kappa violates positive definiteness");
    }
    if (!warned_theta && theta(x) > 0.0) {
      warnings.push_back("physics.theta > 0 acts as a source; the stability estimate assumes theta <= 0");
      warned_theta = true;
    }
  }
  return warnings;
}

void NitscheParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("nitsche.gamma = " + num(gamma) + " violates gamma > 0");
  }
  if (varsigma < -1 || varsigma > 1) {
    throw ConfigError("nitsche.varsigma = " + std::to_string(varsigma) + " is not one of -1, 0, 1");
  }
}

}  // namespace fpsi
