#pragma once

#include "fpsi/common.hpp"
#include "fpsi/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <vector>

namespace fpsi {

/// Which cells a space lives on.
enum class Restriction { Fluid, Poro, Both };

/// Continuous Lagrange P1/P2 space, scalar or 2-vector valued, on a
/// subdomain. Nodes are numbered vertices first (ascending global vertex id),
/// then edge midpoints (ascending facet id); dof = node * components + comp.
class FunctionSpace {
 public:
  FunctionSpace(std::shared_ptr<const Mesh> mesh, int degree, int components, Restriction restriction,
                std::set<FacetTag> dirichlet_tags = {});

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int components() const { return components_; }
  Restriction restriction() const { return restriction_; }
  int nodes_per_cell() const { return degree_ == 1 ? 3 : 6; }
  int num_nodes() const { return static_cast<int>(node_points_.size()); }
  int num_dofs() const { return num_nodes() * components_; }

  bool contains(int cell) const { return cell_nodes_[static_cast<std::size_t>(cell) * 6] >= 0; }
  /// Active cells, ascending.
  const std::vector<int>& cells() const { return cells_; }
  /// Local node order: 3 vertices, then (P2) midpoints of local edges 0, 1, 2.
  std::span<const int> cell_nodes(int cell) const {
    return {cell_nodes_.data() + static_cast<std::size_t>(cell) * 6,
            static_cast<std::size_t>(nodes_per_cell())};
  }
  const Vec2& node_point(int node) const { return node_points_[node]; }
  int dof(int node, int comp) const { return node * components_ + comp; }
  /// Node sitting on mesh vertex `v`, or -1 outside the space.
  int vertex_node(int v) const { return vertex_node_[v]; }

  const std::set<FacetTag>& dirichlet_tags() const { return dirichlet_tags_; }
  /// Ascending list of constrained dofs (all components of Dirichlet nodes).
  const std::vector<int>& dirichlet_dofs() const { return dirichlet_dofs_; }
  const std::vector<int>& dirichlet_nodes() const { return dirichlet_nodes_; }
  bool is_dirichlet_node(int node) const { return dirichlet_flag_[node]; }

  /// Node ids lying on `facet` (2 or 3), or empty if the facet is not in the space.
  std::vector<int> facet_nodes(int facet) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  int components_;
  Restriction restriction_;
  std::set<FacetTag> dirichlet_tags_;
  std::vector<int> cells_;
  std::vector<int> cell_nodes_;  // 6 slots per mesh cell, -1 when inactive
  std::vector<Vec2> node_points_;
  std::vector<int> vertex_node_;  // mesh vertex -> node (or -1)
  std::vector<int> edge_node_;    // mesh facet -> node (or -1)
  std::vector<int> dirichlet_dofs_;
  std::vector<int> dirichlet_nodes_;
  std::vector<bool> dirichlet_flag_;
};

std::shared_ptr<const FunctionSpace> build_space(std::shared_ptr<const Mesh> mesh, int degree, int components,
                                                 Restriction restriction, std::set<FacetTag> dirichlet_tags = {});

/// Affine geometry of one triangle.
struct CellGeometry {
  std::array<Vec2, 3> x;
  double area;
  std::array<Vec2, 3> grad_lambda;

  CellGeometry(const Mesh& mesh, int cell);
  Vec2 map(const std::array<double, 3>& lambda) const {
    return lambda[0] * x[0] + lambda[1] * x[1] + lambda[2] * x[2];
  }
};

/// Lagrange basis of degree 1 or 2 at a barycentric point.
struct ShapeValues {
  int n = 0;
  std::array<double, 6> value{};
  std::array<Vec2, 6> grad{};
};

ShapeValues shape_functions(int degree, const std::array<double, 3>& lambda, const CellGeometry& g);

/// Barycentric coordinates of a point on local edge `edge` at parameter s,
/// where s runs from local vertex (edge+1)%3 (s=0) to (edge+2)%3 (s=1).
std::array<double, 3> edge_point(int edge, double s);

/// Discrete field: one coefficient per dof of `space`.
struct FieldCoefficients {
  std::shared_ptr<const FunctionSpace> space;
  Eigen::VectorXd values;

  explicit FieldCoefficients(std::shared_ptr<const FunctionSpace> s)
      : space(std::move(s)), values(Eigen::VectorXd::Zero(space->num_dofs())) {}
  FieldCoefficients(std::shared_ptr<const FunctionSpace> s, Eigen::VectorXd v);
};

using ScalarFunction = std::function<double(const Vec2&, double)>;
using VectorFunction = std::function<Vec2(const Vec2&, double)>;
using ScalarGradient = std::function<Vec2(const Vec2&, double)>;
/// Row i is the gradient of component i.
using VectorGradient = std::function<Mat2(const Vec2&, double)>;

FieldCoefficients interpolate(std::shared_ptr<const FunctionSpace> space, const ScalarFunction& f, double t);
FieldCoefficients interpolate(std::shared_ptr<const FunctionSpace> space, const VectorFunction& f, double t);

/// Values of the field at a barycentric point of `cell`.
double evaluate_scalar(const FieldCoefficients& u, int cell, const ShapeValues& sv);
Vec2 evaluate_vector(const FieldCoefficients& u, int cell, const ShapeValues& sv);
Mat2 evaluate_vector_gradient(const FieldCoefficients& u, int cell, const ShapeValues& sv);

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
};

/// Quadrature of ||u - u_h|| and |u - u_h|_1 over the space's cells.
ErrorNorms error_norms(const FieldCoefficients& uh, const ScalarFunction& exact, const ScalarGradient& grad,
                       double t);
ErrorNorms error_norms(const FieldCoefficients& uh, const VectorFunction& exact, const VectorGradient& grad,
                       double t);

}  // namespace fpsi
