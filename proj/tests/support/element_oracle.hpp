#pragma once

// Dense single-triangle assembler with exact integration of polynomials in
// reference coordinates. Shares nothing with the library's quadrature or
// shape functions; used to cross-check element matrices.

#include <Eigen/Dense>

#include <array>
#include <map>
#include <utility>

namespace oracle {

/// Polynomial in reference coordinates (xi, eta).
class Poly {
 public:
  Poly() = default;
  Poly(double c) {
    if (c != 0.0) terms_[{0, 0}] = c;
  }
  static Poly xi() { return monomial(1, 0); }
  static Poly eta() { return monomial(0, 1); }
  static Poly monomial(int a, int b, double c = 1.0) {
    Poly p;
    p.terms_[{a, b}] = c;
    return p;
  }

  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [k, v] : o.terms_) r.terms_[k] += v;
    return r;
  }
  Poly operator-(const Poly& o) const { return *this + o * -1.0; }
  Poly operator*(const Poly& o) const {
    Poly r;
    for (const auto& [k1, v1] : terms_)
      for (const auto& [k2, v2] : o.terms_) r.terms_[{k1.first + k2.first, k1.second + k2.second}] += v1 * v2;
    return r;
  }
  Poly operator*(double s) const {
    Poly r = *this;
    for (auto& [k, v] : r.terms_) v *= s;
    return r;
  }

  Poly d_xi() const {
    Poly r;
    for (const auto& [k, v] : terms_)
      if (k.first > 0) r.terms_[{k.first - 1, k.second}] += v * k.first;
    return r;
  }
  Poly d_eta() const {
    Poly r;
    for (const auto& [k, v] : terms_)
      if (k.second > 0) r.terms_[{k.first, k.second - 1}] += v * k.second;
    return r;
  }

  /// Integral over {(0,0),(1,0),(0,1)}: a! b! / (a+b+2)!.
  double integrate_reference() const {
    double s = 0.0;
    for (const auto& [k, v] : terms_) s += v * fact(k.first) * fact(k.second) / fact(k.first + k.second + 2);
    return s;
  }

 private:
  static double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }
  std::map<std::pair<int, int>, double> terms_;
};

/// Affine triangle with P2 Lagrange basis: vertices first, then midpoints of
/// the edges opposite vertex 0, 1, 2.
struct Element {
  std::array<Eigen::Vector2d, 3> x;
  Eigen::Matrix2d jinv_t;  // J^{-T}, J = [x1 - x0, x2 - x0]
  double det;
  std::array<Poly, 6> p2;
  std::array<Poly, 3> p1;

  explicit Element(const std::array<Eigen::Vector2d, 3>& v) : x(v) {
    Eigen::Matrix2d J;
    J.col(0) = v[1] - v[0];
    J.col(1) = v[2] - v[0];
    det = J.determinant();
    jinv_t = J.inverse().transpose();
    const Poly l0 = Poly(1.0) - Poly::xi() - Poly::eta(), l1 = Poly::xi(), l2 = Poly::eta();
    p1 = {l0, l1, l2};
    const std::array<Poly, 3> l{l0, l1, l2};
    for (int i = 0; i < 3; ++i) p2[i] = l[i] * (l[i] * 2.0 - Poly(1.0));
    p2[3] = l1 * l2 * 4.0;
    p2[4] = l2 * l0 * 4.0;
    p2[5] = l0 * l1 * 4.0;
  }

  /// Physical gradient (d/dx, d/dy) of a reference polynomial.
  std::array<Poly, 2> grad(const Poly& p) const {
    const Poly a = p.d_xi(), b = p.d_eta();
    return {a * jinv_t(0, 0) + b * jinv_t(0, 1), a * jinv_t(1, 0) + b * jinv_t(1, 1)};
  }
  double integrate(const Poly& p) const { return std::abs(det) * p.integrate_reference(); }
};

/// 2 mu (eps(u), eps(v)) for P2^2, dof = node * 2 + component.
inline Eigen::MatrixXd p2_strain(const Element& e, double mu) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(12, 12);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      const auto ga = e.grad(e.p2[a]), gb = e.grad(e.p2[b]);
      const double dot = e.integrate(ga[0] * gb[0] + ga[1] * gb[1]);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          // eps(N_b e_j) : eps(N_a e_i) = (delta_ij grad N_a . grad N_b + d_j N_a d_i N_b) / 2
          const double cross = e.integrate(ga[j] * gb[i]);
          K(2 * a + i, 2 * b + j) = mu * ((i == j ? dot : 0.0) + cross);
        }
    }
  return K;
}

/// (w . grad u, v) for P2^2 with w given by its six nodal values.
inline Eigen::MatrixXd p2_convection(const Element& e, const std::array<Eigen::Vector2d, 6>& w_nodes) {
  Poly wx, wy;
  for (int c = 0; c < 6; ++c) {
    wx = wx + e.p2[c] * w_nodes[c].x();
    wy = wy + e.p2[c] * w_nodes[c].y();
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(12, 12);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      const auto gb = e.grad(e.p2[b]);
      const double v = e.integrate(e.p2[a] * (wx * gb[0] + wy * gb[1]));
      C(2 * a, 2 * b) = v;
      C(2 * a + 1, 2 * b + 1) = v;
    }
  return C;
}

inline Eigen::Matrix3d p1_mass(const Element& e) {
  Eigen::Matrix3d m;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m(a, b) = e.integrate(e.p1[a] * e.p1[b]);
  return m;
}

}  // namespace oracle
