#include "fpsi/manufactured.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>

namespace fpsi {

namespace {

constexpr double k = 4.0 * std::numbers::pi;

}  // namespace

ExactSolution exact_solution() {
  ExactSolution e;
  e.uf = [](const Vec2& x, double t) {
    const double x3 = x.x() * x.x() * x.x();
    return Vec2(t * x3 * std::cos(k * x.y()), -2.0 * t * x3 * std::sin(k * x.y()));
  };
  e.us = e.uf;
  e.grad_uf = [](const Vec2& x, double t) {
    const double X = x.x(), x2 = X * X, x3 = x2 * X;
    const double s = std::sin(k * x.y()), c = std::cos(k * x.y());
    Mat2 g;
    g << 3.0 * t * x2 * c, -k * t * x3 * s,  //
        -6.0 * t * x2 * s, -2.0 * k * t * x3 * c;
    return g;
  };
  e.grad_us = e.grad_uf;
  e.dt_uf = [](const Vec2& x, double) {
    const double x3 = x.x() * x.x() * x.x();
    return Vec2(x3 * std::cos(k * x.y()), -2.0 * x3 * std::sin(k * x.y()));
  };
  e.dt_us = e.dt_uf;

  e.ps = [](const Vec2& x, double t) { return t * t * (1.0 - std::sin(k * x.x()) * std::sin(k * x.y())); };
  e.pp = e.ps;
  e.grad_ps = [](const Vec2& x, double t) {
    return Vec2(-t * t * k * std::cos(k * x.x()) * std::sin(k * x.y()),
                -t * t * k * std::sin(k * x.x()) * std::cos(k * x.y()));
  };
  e.grad_pp = e.grad_ps;
  e.dt_ps = [](const Vec2& x, double t) { return 2.0 * t * (1.0 - std::sin(k * x.x()) * std::sin(k * x.y())); };
  e.dt_pp = e.dt_ps;

  e.ur = [](const Vec2& x, double t) {
    const double x3 = x.x() * x.x() * x.x();
    const double s = std::sin(k * x.y()), c = std::cos(k * x.y());
    return Vec2(t * t * s * s - t * x3 * c, t * t * s * s + 2.0 * t * x3 * s);
  };
  e.grad_ur = [](const Vec2& x, double t) {
    const double X = x.x(), x2 = X * X, x3 = x2 * X;
    const double s = std::sin(k * x.y()), c = std::cos(k * x.y());
    const double dss = 2.0 * k * t * t * s * c;
    Mat2 g;
    g << -3.0 * t * x2 * c, dss + k * t * x3 * s,  //
        6.0 * t * x2 * s, dss + 2.0 * k * t * x3 * c;
    return g;
  };
  e.dt_ur = [](const Vec2& x, double t) {
    const double x3 = x.x() * x.x() * x.x();
    const double s = std::sin(k * x.y()), c = std::cos(k * x.y());
    return Vec2(2.0 * t * s * s - x3 * c, 2.0 * t * s * s + 2.0 * x3 * s);
  };

  e.ys = [](const Vec2& x, double t) {
    const double x3 = x.x() * x.x() * x.x();
    return Vec2(0.5 * t * t * x3 * std::cos(k * x.y()), -t * t * x3 * std::sin(k * x.y()));
  };
  e.grad_ys = [](const Vec2& x, double t) {
    const double X = x.x(), x2 = X * X, x3 = x2 * X;
    const double s = std::sin(k * x.y()), c = std::cos(k * x.y());
    Mat2 g;
    g << 1.5 * t * t * x2 * c, -0.5 * k * t * t * x3 * s,  //
        -3.0 * t * t * x2 * s, -k * t * t * x3 * c;
    return g;
  };
  e.dt_ys = [](const Vec2& x, double t) {
    const double x3 = x.x() * x.x() * x.x();
    return Vec2(t * x3 * std::cos(k * x.y()), -2.0 * t * x3 * std::sin(k * x.y()));
  };
  return e;
}

SourceSet derive_sources(const PhysicalParams& params) {
  if (!params.phi.is_constant()) throw Error("manufactured sources assume constant porosity");
  const double phi = params.phi.constant_value();
  const double rho_f = params.rho_f, mu = params.mu_f, mu_p = params.mu_p, lambda = params.lambda_p;
  const double rho_p = params.rho_s * (1.0 - phi) + rho_f * phi;
  const double storage = (1.0 - phi) * (1.0 - phi) / params.bulk_modulus;
  const auto kappa = params.kappa;
  const auto theta = params.theta;

  SourceSet s;
  s.free_flow = [=](const Vec2& p, double t) {
    const double x = p.x(), y = p.y();
    const double x2 = x * x, x3 = x2 * x, x5 = x3 * x2, x6 = x3 * x3;
    const double sy = std::sin(k * y), cy = std::cos(k * y);
    const double sx = std::sin(k * x), cx = std::cos(k * x);
    const double f1 = rho_f * x3 * cy - mu * t * cy * (12.0 * x - 6.0 * k * x2 - k * k * x3) -
                      k * t * t * cx * sy + t * t * (3.0 * x5 * cy * cy + 2.0 * k * x6 * sy * sy);
    const double f2 = -2.0 * rho_f * x3 * sy - mu * t * sy * (-12.0 * x - 3.0 * k * x2 + 4.0 * k * k * x3) -
                      k * t * t * sx * cy + t * t * sy * cy * (4.0 * k * x6 - 6.0 * x5);
    return Vec2(f1, f2);
  };
  s.free_mass = [](const Vec2& p, double t) {
    const double x = p.x();
    return t * x * x * std::cos(k * p.y()) * (3.0 - 2.0 * k * x);
  };

  // w = u_r + u_s = t^2 sin^2(ky) (1, 1)
  s.fluid_momentum = [=](const Vec2& p, double t) {
    const double x = p.x(), y = p.y();
    const double sy = std::sin(k * y);
    const Vec2 w = t * t * sy * sy * Vec2(1.0, 1.0);
    const Vec2 dt_w = 2.0 * t * sy * sy * Vec2(1.0, 1.0);
    const Vec2 visc = -2.0 * mu * phi * k * k * t * t * std::cos(2.0 * k * y) * Vec2(1.0, 2.0);
    const Vec2 grad_p(-t * t * k * std::cos(k * x) * sy, -t * t * k * std::sin(k * x) * std::cos(k * y));
    const double x3 = x * x * x;
    const Vec2 ur(t * t * sy * sy - t * x3 * std::cos(k * y), t * t * sy * sy + 2.0 * t * x3 * sy);
    return (rho_f * phi * dt_w + visc + phi * grad_p + phi * phi * kappa(p).inverse() * ur - theta(p) * w).eval();
  };

  s.total_momentum = [=](const Vec2& p, double t) {
    const double x = p.x(), y = p.y();
    const double x2 = x * x, x3 = x2 * x;
    const double sy = std::sin(k * y), cy = std::cos(k * y);
    const Vec2 w = t * t * sy * sy * Vec2(1.0, 1.0);
    const Vec2 dt_ur(2.0 * t * sy * sy - x3 * cy, 2.0 * t * sy * sy + 2.0 * x3 * sy);
    const Vec2 dt_us(x3 * cy, -2.0 * x3 * sy);
    const Vec2 visc = -2.0 * mu * phi * k * k * t * t * std::cos(2.0 * k * y) * Vec2(1.0, 2.0);
    // y_s = t^2 Y
    const Vec2 lap_Y(3.0 * x * cy - 0.5 * k * k * x3 * cy, -6.0 * x * sy + k * k * x3 * sy);
    const Vec2 grad_div_Y(3.0 * x * cy - 3.0 * k * x2 * cy, -1.5 * k * x2 * sy + k * k * x3 * sy);
    const Vec2 elastic = -t * t * (mu_p * (lap_Y + grad_div_Y) + lambda * grad_div_Y);
    const Vec2 grad_p(-t * t * k * std::cos(k * x) * sy, -t * t * k * std::sin(k * x) * cy);
    return (rho_f * phi * dt_ur + rho_p * dt_us + visc + elastic + grad_p - theta(p) * w).eval();
  };

  s.pore_mass = [=](const Vec2& p, double t) {
    const double x = p.x(), y = p.y();
    const double div_dt_y = t * x * x * std::cos(k * y) * (3.0 - 2.0 * k * x);
    return storage * 2.0 * t * (1.0 - std::sin(k * x) * std::sin(k * y)) + (1.0 - phi) * div_dt_y +
           phi * t * t * k * std::sin(2.0 * k * y);
  };
  return s;
}

InterfaceCorrections derive_corrections(const PhysicalParams& params) {
  if (!params.phi.is_constant()) throw Error("manufactured corrections assume constant porosity");
  const double phi = params.phi.constant_value();
  const double mu = params.mu_f, mu_p = params.mu_p, lambda = params.lambda_p, alpha = params.alpha_bjs;
  const auto kappa = params.kappa;
  InterfaceCorrections m;
  m.m1 = [](const Vec2&, double) { return 0.0; };
  m.m2 = [=](const Vec2& p, double t) {
    const double x3 = p.x() * p.x() * p.x();
    return (1.0 - phi) * t * t + 4.0 * k * mu * t * x3;
  };
  m.m3 = [=](const Vec2& p, double t) {
    const double x = p.x(), x2 = x * x, x3 = x2 * x;
    return Vec2(0.0, -4.0 * k * mu * t * x3 + 2.0 * k * mu_p * t * t * x3 - lambda * t * t * (1.5 * x2 - k * x3));
  };
  m.m4 = [](const Vec2&, double) { return 0.0; };
  m.m5 = [=](const Vec2& p, double t) {
    const double z = kappa(p)(0, 0);
    return mu * alpha / std::sqrt(z) * t * p.x() * p.x() * p.x();
  };
  return m;
}

DirichletData manufactured_dirichlet() {
  const ExactSolution e = exact_solution();
  return {e.uf, e.ur, e.ys};
}

}  // namespace fpsi
