#include "fpsi/oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fpsi {

std::string OracleReport::describe() const {
  std::ostringstream s;
  s << points << " points, max error " << max_error << " (tolerance " << tolerance << ")";
  if (!worst_quantity.empty()) {
    s << ", worst " << worst_quantity << " at x = (" << worst_point.x() << ", " << worst_point.y()
      << "), t = " << worst_time;
  }
  return s.str();
}

namespace {

constexpr double kStep = 1e-6;

class Tracker {
 public:
  Tracker(OracleReport& r, bool relative) : r_(r), relative_(relative) {}

  void compare(const char* what, double got, double expected, const Vec2& x, double t) {
    const double err = std::abs(got - expected) / (relative_ ? std::max(std::abs(expected), 1.0) : 1.0);
    if (!(err <= r_.max_error) || r_.worst_quantity.empty()) {
      if (!(err <= r_.max_error) || !std::isfinite(err)) {
        r_.max_error = std::isfinite(err) ? err : INFINITY;
        r_.worst_quantity = what;
        r_.worst_point = x;
        r_.worst_time = t;
      }
    }
  }
  void compare(const char* what, const Vec2& got, const Vec2& expected, const Vec2& x, double t) {
    compare(what, got.x(), expected.x(), x, t);
    compare(what, got.y(), expected.y(), x, t);
  }
  void compare(const char* what, const Mat2& got, const Mat2& expected, const Vec2& x, double t) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) compare(what, got(i, j), expected(i, j), x, t);
  }

 private:
  OracleReport& r_;
  bool relative_;
};

using TensorField = std::function<Mat2(const Vec2&, double)>;

/// Row-wise divergence of a tensor field by central differences.
Vec2 fd_divergence(const TensorField& s, const Vec2& x, double t) {
  const Vec2 ex(kStep, 0.0), ey(0.0, kStep);
  const Mat2 dx = (s(x + ex, t) - s(x - ex, t)) / (2.0 * kStep);
  const Mat2 dy = (s(x + ey, t) - s(x - ey, t)) / (2.0 * kStep);
  return Vec2(dx(0, 0) + dy(0, 1), dx(1, 0) + dy(1, 1));
}

template <class F>
auto fd_time(const F& f, const Vec2& x, double t) {
  return ((f(x, t + kStep) - f(x, t - kStep)) / (2.0 * kStep));
}

Mat2 sym(const Mat2& g) { return g + g.transpose(); }

}  // namespace

OracleReport check_exact_derivatives(const ExactSolution& e, int points, std::uint64_t seed, double tolerance) {
  OracleReport r;
  r.tolerance = tolerance;
  r.points = points;
  Tracker tr(r, true);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, 1.0), ut(0.05, 1.0);
  const Vec2 ex(kStep, 0.0), ey(0.0, kStep);
  auto fd_grad_v = [&](const VectorFunction& f, const Vec2& x, double t) {
    Mat2 g;
    g.col(0) = (f(x + ex, t) - f(x - ex, t)) / (2.0 * kStep);
    g.col(1) = (f(x + ey, t) - f(x - ey, t)) / (2.0 * kStep);
    return g;
  };
  auto fd_grad_s = [&](const ScalarFunction& f, const Vec2& x, double t) {
    return Vec2((f(x + ex, t) - f(x - ex, t)) / (2.0 * kStep), (f(x + ey, t) - f(x - ey, t)) / (2.0 * kStep));
  };
  for (int i = 0; i < points; ++i) {
    const Vec2 x(ux(rng), ux(rng));
    const double t = ut(rng);
    tr.compare("grad u_f", e.grad_uf(x, t), fd_grad_v(e.uf, x, t), x, t);
    tr.compare("grad u_r", e.grad_ur(x, t), fd_grad_v(e.ur, x, t), x, t);
    tr.compare("grad y_s", e.grad_ys(x, t), fd_grad_v(e.ys, x, t), x, t);
    tr.compare("grad u_s", e.grad_us(x, t), fd_grad_v(e.us, x, t), x, t);
    tr.compare("grad p^S", e.grad_ps(x, t), fd_grad_s(e.ps, x, t), x, t);
    tr.compare("grad p^P", e.grad_pp(x, t), fd_grad_s(e.pp, x, t), x, t);
    tr.compare("d_t u_f", e.dt_uf(x, t), fd_time(e.uf, x, t).eval(), x, t);
    tr.compare("d_t u_r", e.dt_ur(x, t), fd_time(e.ur, x, t).eval(), x, t);
    tr.compare("d_t y_s", e.dt_ys(x, t), fd_time(e.ys, x, t).eval(), x, t);
    tr.compare("d_t u_s", e.dt_us(x, t), fd_time(e.us, x, t).eval(), x, t);
    tr.compare("d_t p^S", e.dt_ps(x, t), fd_time(e.ps, x, t), x, t);
    tr.compare("d_t p^P", e.dt_pp(x, t), fd_time(e.pp, x, t), x, t);
    tr.compare("u_s - d_t y_s", e.us(x, t), fd_time(e.ys, x, t).eval(), x, t);
    tr.compare("grad u_s - d_t grad y_s", e.grad_us(x, t), fd_time(e.grad_ys, x, t).eval(), x, t);
  }
  return r;
}

OracleReport check_sources(const SourceSet& s, const ExactSolution& e, const PhysicalParams& p, int points,
                           std::uint64_t seed, double tolerance) {
  OracleReport r;
  r.tolerance = tolerance;
  r.points = points;
  Tracker tr(r, true);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, 1.0), uy_s(0.0, 0.5), uy_p(0.5, 1.0), ut(0.05, 1.0);

  const double mu = p.mu_f;
  const TensorField sigma_s = [&](const Vec2& x, double t) -> Mat2 {
    return mu * sym(e.grad_uf(x, t)) - e.ps(x, t) * Mat2::Identity();
  };
  // the solid velocity stands in for d_t y_s (checked in check_exact_derivatives)
  const TensorField sigma_fp = [&](const Vec2& x, double t) -> Mat2 {
    const double phi = p.phi(x);
    return mu * phi * sym(e.grad_ur(x, t) + e.grad_us(x, t)) - phi * e.pp(x, t) * Mat2::Identity();
  };
  const TensorField sigma_sp = [&](const Vec2& x, double t) -> Mat2 {
    const Mat2 g = e.grad_ys(x, t);
    return p.mu_p * sym(g) + (p.lambda_p * g.trace() - (1.0 - p.phi(x)) * e.pp(x, t)) * Mat2::Identity();
  };

  for (int i = 0; i < points; ++i) {
    const double t = ut(rng);
    const double xs = ux(rng);
    const Vec2 xf(xs, uy_s(rng));
    const Vec2 xp(ux(rng), uy_p(rng));

    // free flow: rho_f d_t u + (u . grad) u - div sigma
    if (s.free_flow) {
      const Vec2 expected = p.rho_f * fd_time(e.uf, xf, t) + e.grad_uf(xf, t) * e.uf(xf, t) -
                            fd_divergence(sigma_s, xf, t);
      tr.compare("f_S", s.free_flow(xf, t), expected, xf, t);
    }
    if (s.free_mass) tr.compare("r_S", s.free_mass(xf, t), e.grad_uf(xf, t).trace(), xf, t);

    const double phi = p.phi(xp);
    const Vec2 ur = e.ur(xp, t), us = e.us(xp, t);
    const Vec2 dt_ur = fd_time(e.ur, xp, t), dt_us = fd_time(e.us, xp, t);
    const double theta = p.theta(xp);
    const Vec2 div_fp = fd_divergence(sigma_fp, xp, t);
    if (s.fluid_momentum) {
      const Vec2 expected = p.rho_f * phi * (dt_ur + dt_us) - div_fp - e.pp(xp, t) * p.phi.gradient(xp) +
                            phi * phi * p.kappa(xp).inverse() * ur - theta * (us + ur);
      tr.compare("fluid momentum load", s.fluid_momentum(xp, t), expected, xp, t);
    }
    if (s.total_momentum) {
      const Vec2 expected = p.rho_f * phi * dt_ur + p.rho_p(xp) * dt_us - div_fp -
                            fd_divergence(sigma_sp, xp, t) - theta * (ur + us);
      tr.compare("total momentum load", s.total_momentum(xp, t), expected, xp, t);
    }
    if (s.pore_mass) {
      const double storage = (1.0 - phi) * (1.0 - phi) / p.bulk_modulus;
      const double expected = storage * fd_time(e.pp, xp, t) + e.grad_us(xp, t).trace() +
                              phi * e.grad_ur(xp, t).trace() + p.phi.gradient(xp).dot(ur);
      tr.compare("pore mass load", s.pore_mass(xp, t), expected, xp, t);
    }
  }
  return r;
}

OracleReport check_corrections(const InterfaceCorrections& m, const ExactSolution& e, const PhysicalParams& p,
                               int points, std::uint64_t seed, double tolerance) {
  OracleReport r;
  r.tolerance = tolerance;
  r.points = points;
  Tracker tr(r, false);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, 1.0), ut(0.05, 1.0);
  const Vec2 nS(0.0, 1.0), nP(0.0, -1.0), tau(1.0, 0.0);
  const double mu = p.mu_f;
  for (int i = 0; i < points; ++i) {
    const Vec2 x(ux(rng), 0.5);
    const double t = ut(rng);
    const double phi = p.phi(x);
    const Vec2 dt_y = fd_time(e.ys, x, t);
    const Mat2 sig_s = mu * sym(e.grad_uf(x, t)) - e.ps(x, t) * Mat2::Identity();
    const Mat2 sig_fp = mu * phi * sym(e.grad_ur(x, t) + e.grad_us(x, t)) - phi * e.pp(x, t) * Mat2::Identity();
    const Mat2 gy = e.grad_ys(x, t);
    const Mat2 sig_sp = p.mu_p * sym(gy) + (p.lambda_p * gy.trace() - (1.0 - phi) * e.pp(x, t)) * Mat2::Identity();
    const double beta = mu * p.alpha_bjs / std::sqrt(tau.dot(p.kappa(x) * tau));

    const double m1 = e.uf(x, t).dot(nS) + (dt_y + e.ur(x, t)).dot(nP);
    const double m2 = -(sig_s * nS).dot(nS) + (sig_fp * nP).dot(nP);
    const Vec2 m3 = sig_s * nS + sig_fp * nP + sig_sp * nP;
    const double m4 = -(sig_s * nS).dot(tau) - beta * (e.uf(x, t) - dt_y).dot(tau);
    const double m5 = -(sig_fp * nP).dot(tau) - beta * e.ur(x, t).dot(tau);
    tr.compare("m1", m.m1(x, t), m1, x, t);
    tr.compare("m2", m.m2(x, t), m2, x, t);
    tr.compare("m3", m.m3(x, t), m3, x, t);
    tr.compare("m4", m.m4(x, t), m4, x, t);
    tr.compare("m5", m.m5(x, t), m5, x, t);
  }
  return r;
}

void gate_manufactured(const PhysicalParams& params) {
  const ExactSolution e = exact_solution();
  const OracleReport d = check_exact_derivatives(e);
  if (!d.passed()) throw OracleMismatch("exact-solution derivative oracle failed: " + d.describe());
  const OracleReport s = check_sources(derive_sources(params), e, params);
  if (!s.passed()) throw OracleMismatch("source oracle failed: " + s.describe());
  const OracleReport c = check_corrections(derive_corrections(params), e, params);
  if (!c.passed()) throw OracleMismatch("interface-correction oracle failed: " + c.describe());
}

}  // namespace fpsi
