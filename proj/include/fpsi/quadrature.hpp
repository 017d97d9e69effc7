#pragma once

#include <array>
#include <vector>

namespace fpsi {

enum class Entity { Triangle, Segment };

/// Points are barycentric triples on the reference triangle
/// {(0,0),(1,0),(0,1)} (weights sum to 1/2), or (1-s, s, 0) on the unit
/// segment (weights sum to 1).
struct QuadratureRule {
  Entity entity;
  int degree;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureDegree = 6;

/// Smallest shipped rule exact for polynomials up to `required_degree`.
/// Throws fpsi::Error beyond kMaxQuadratureDegree.
const QuadratureRule& quadrature_rule(Entity entity, int required_degree);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace fpsi
