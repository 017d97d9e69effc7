#include "fpsi/quadrature.hpp"

#include "fpsi/common.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fpsi {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    // map [-1, 1] -> [0, 1]
    nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
    weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

QuadratureRule make_segment(int degree) {
  QuadratureRule r{Entity::Segment, degree, {}, {}};
  std::vector<double> s, w;
  gauss_legendre(degree / 2 + 1, s, w);
  for (std::size_t i = 0; i < s.size(); ++i) {
    r.points.push_back({1.0 - s[i], s[i], 0.0});
    r.weights.push_back(w[i]);
  }
  return r;
}

QuadratureRule make_triangle(int degree) {
  QuadratureRule r{Entity::Triangle, degree, {}, {}};
  if (degree <= 1) {
    r.points = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
    r.weights = {0.5};
    return r;
  }
  if (degree == 2) {
    r.points = {{2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}};
    r.weights = {1.0 / 6, 1.0 / 6, 1.0 / 6};
    return r;
  }
  // Collapsed (Duffy) tensor product: x = u, y = v (1 - u), Jacobian 1 - u.
  // The u-direction integrand has degree `degree` + 1.
  std::vector<double> u, wu, v, wv;
  gauss_legendre((degree + 1) / 2 + 1, u, wu);
  gauss_legendre(degree / 2 + 1, v, wv);
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double x = u[i];
      const double y = v[j] * (1.0 - u[i]);
      r.points.push_back({1.0 - x - y, x, y});
      r.weights.push_back(wu[i] * wv[j] * (1.0 - u[i]));
    }
  }
  return r;
}

struct RuleTable {
  std::vector<QuadratureRule> triangle, segment;
  RuleTable() {
    for (int d = 0; d <= kMaxQuadratureDegree; ++d) {
      triangle.push_back(make_triangle(d));
      segment.push_back(make_segment(d));
    }
  }
};

}  // namespace

const QuadratureRule& quadrature_rule(Entity entity, int required_degree) {
  static const RuleTable table;
  if (required_degree > kMaxQuadratureDegree) {
    throw Error("no quadrature rule of degree " + std::to_string(required_degree) +
                " (maximum " + std::to_string(kMaxQuadratureDegree) + ")");
  }
  const int d = required_degree < 0 ? 0 : required_degree;
  return entity == Entity::Triangle ? table.triangle[d] : table.segment[d];
}

}  // namespace fpsi
