#include "fpsi/function_space.hpp"

#include "fpsi/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace fpsi {

namespace {

bool cell_in(Restriction r, Subdomain s) {
  switch (r) {
    case Restriction::Fluid: return s == Subdomain::Fluid;
    case Restriction::Poro: return s == Subdomain::Poro;
    case Restriction::Both: return true;
  }
  return false;
}

}  // namespace

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, int degree, int components,
                             Restriction restriction, std::set<FacetTag> dirichlet_tags)
    : mesh_(std::move(mesh)),
      degree_(degree),
      components_(components),
      restriction_(restriction),
      dirichlet_tags_(std::move(dirichlet_tags)) {
  if (degree_ != 1 && degree_ != 2) throw Error("only P1 and P2 spaces are supported");
  if (components_ != 1 && components_ != 2) throw Error("spaces have 1 or 2 components");
  for (FacetTag t : dirichlet_tags_) {
    if (t == FacetTag::Interior || t == FacetTag::Sigma) {
      throw Error(std::string("tag ") + to_string(t) + " cannot carry Dirichlet data");
    }
  }
  const Mesh& m = *mesh_;
  for (int c = 0; c < m.num_cells(); ++c) {
    if (cell_in(restriction_, m.cells()[c].subdomain)) cells_.push_back(c);
  }
  vertex_node_.assign(static_cast<std::size_t>(m.num_vertices()), -1);
  edge_node_.assign(static_cast<std::size_t>(m.num_facets()), -1);
  std::vector<bool> used_vertex(static_cast<std::size_t>(m.num_vertices()), false);
  std::vector<bool> used_edge(static_cast<std::size_t>(m.num_facets()), false);
  for (int c : cells_) {
    for (int v : m.cells()[c].vertices) used_vertex[v] = true;
    for (int f : m.cell_facets(c)) used_edge[f] = true;
  }
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (!used_vertex[v]) continue;
    vertex_node_[v] = static_cast<int>(node_points_.size());
    node_points_.push_back(m.vertices()[v]);
  }
  if (degree_ == 2) {
    for (int f = 0; f < m.num_facets(); ++f) {
      if (!used_edge[f]) continue;
      edge_node_[f] = static_cast<int>(node_points_.size());
      node_points_.push_back(m.facet_midpoint(f));
    }
  }
  cell_nodes_.assign(static_cast<std::size_t>(m.num_cells()) * 6, -1);
  for (int c : cells_) {
    int* slot = cell_nodes_.data() + static_cast<std::size_t>(c) * 6;
    for (int i = 0; i < 3; ++i) slot[i] = vertex_node_[m.cells()[c].vertices[i]];
    if (degree_ == 2) {
      for (int i = 0; i < 3; ++i) slot[3 + i] = edge_node_[m.cell_facets(c)[i]];
    } else {
      for (int i = 3; i < 6; ++i) slot[i] = -2;  // active marker for contains()
    }
  }

  dirichlet_flag_.assign(node_points_.size(), false);
  for (int f = 0; f < m.num_facets(); ++f) {
    if (!dirichlet_tags_.count(m.facets()[f].tag)) continue;
    for (int n : facet_nodes(f)) dirichlet_flag_[n] = true;
  }
  for (int n = 0; n < num_nodes(); ++n) {
    if (!dirichlet_flag_[n]) continue;
    dirichlet_nodes_.push_back(n);
    for (int c = 0; c < components_; ++c) dirichlet_dofs_.push_back(dof(n, c));
  }
}

std::vector<int> FunctionSpace::facet_nodes(int facet) const {
  const auto& f = mesh_->facets()[facet];
  std::vector<int> out;
  const int a = vertex_node_[f.vertices[0]];
  const int b = vertex_node_[f.vertices[1]];
  if (a < 0 || b < 0) return out;
  if (degree_ == 2 && edge_node_[facet] < 0) return out;
  out = {a, b};
  if (degree_ == 2) out.push_back(edge_node_[facet]);
  return out;
}

std::shared_ptr<const FunctionSpace> build_space(std::shared_ptr<const Mesh> mesh, int degree, int components,
                                                 Restriction restriction, std::set<FacetTag> dirichlet_tags) {
  return std::make_shared<const FunctionSpace>(std::move(mesh), degree, components, restriction,
                                               std::move(dirichlet_tags));
}

CellGeometry::CellGeometry(const Mesh& mesh, int cell) {
  const auto& v = mesh.cells()[cell].vertices;
  for (int i = 0; i < 3; ++i) x[i] = mesh.vertices()[v[i]];
  const double two_a = (x[1].x() - x[0].x()) * (x[2].y() - x[0].y()) -
                       (x[2].x() - x[0].x()) * (x[1].y() - x[0].y());
  area = 0.5 * two_a;
  for (int i = 0; i < 3; ++i) {
    const Vec2& a = x[(i + 1) % 3];
    const Vec2& b = x[(i + 2) % 3];
    grad_lambda[i] = Vec2(a.y() - b.y(), b.x() - a.x()) / two_a;
  }
}

ShapeValues shape_functions(int degree, const std::array<double, 3>& l, const CellGeometry& g) {
  ShapeValues s;
  if (degree == 1) {
    s.n = 3;
    for (int i = 0; i < 3; ++i) {
      s.value[i] = l[i];
      s.grad[i] = g.grad_lambda[i];
    }
    return s;
  }
  s.n = 6;
  for (int i = 0; i < 3; ++i) {
    s.value[i] = l[i] * (2.0 * l[i] - 1.0);
    s.grad[i] = (4.0 * l[i] - 1.0) * g.grad_lambda[i];
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    s.value[3 + i] = 4.0 * l[a] * l[b];
    s.grad[3 + i] = 4.0 * (l[a] * g.grad_lambda[b] + l[b] * g.grad_lambda[a]);
  }
  return s;
}

std::array<double, 3> edge_point(int edge, double s) {
  std::array<double, 3> l{0.0, 0.0, 0.0};
  l[(edge + 1) % 3] = 1.0 - s;
  l[(edge + 2) % 3] = s;
  return l;
}

FieldCoefficients::FieldCoefficients(std::shared_ptr<const FunctionSpace> s, Eigen::VectorXd v)
    : space(std::move(s)), values(std::move(v)) {
  if (values.size() != space->num_dofs()) {
    throw Error("coefficient vector length " + std::to_string(values.size()) + " does not match " +
                std::to_string(space->num_dofs()) + " dofs");
  }
}

FieldCoefficients interpolate(std::shared_ptr<const FunctionSpace> space, const ScalarFunction& f, double t) {
  if (space->components() != 1) throw Error("scalar interpolation into a vector space");
  FieldCoefficients u(space);
  for (int n = 0; n < space->num_nodes(); ++n) u.values[n] = f(space->node_point(n), t);
  return u;
}

FieldCoefficients interpolate(std::shared_ptr<const FunctionSpace> space, const VectorFunction& f, double t) {
  if (space->components() != 2) throw Error("vector interpolation into a scalar space");
  FieldCoefficients u(space);
  for (int n = 0; n < space->num_nodes(); ++n) {
    const Vec2 v = f(space->node_point(n), t);
    u.values[space->dof(n, 0)] = v.x();
    u.values[space->dof(n, 1)] = v.y();
  }
  return u;
}

double evaluate_scalar(const FieldCoefficients& u, int cell, const ShapeValues& sv) {
  const auto nodes = u.space->cell_nodes(cell);
  double v = 0.0;
  for (int a = 0; a < sv.n; ++a) v += u.values[nodes[a]] * sv.value[a];
  return v;
}

Vec2 evaluate_vector(const FieldCoefficients& u, int cell, const ShapeValues& sv) {
  const auto nodes = u.space->cell_nodes(cell);
  Vec2 v = Vec2::Zero();
  for (int a = 0; a < sv.n; ++a) {
    v.x() += u.values[2 * nodes[a]] * sv.value[a];
    v.y() += u.values[2 * nodes[a] + 1] * sv.value[a];
  }
  return v;
}

Mat2 evaluate_vector_gradient(const FieldCoefficients& u, int cell, const ShapeValues& sv) {
  const auto nodes = u.space->cell_nodes(cell);
  Mat2 g = Mat2::Zero();
  for (int a = 0; a < sv.n; ++a) {
    g.row(0) += u.values[2 * nodes[a]] * sv.grad[a].transpose();
    g.row(1) += u.values[2 * nodes[a] + 1] * sv.grad[a].transpose();
  }
  return g;
}

namespace {

template <class Integrand>
ErrorNorms accumulate_errors(const FunctionSpace& space, Integrand&& integrand) {
  const auto& rule = quadrature_rule(Entity::Triangle, std::min(2 * space.degree() + 2, kMaxQuadratureDegree));
  double l2 = 0.0, h1 = 0.0;
  for (int c : space.cells()) {
    const CellGeometry g(space.mesh(), c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const ShapeValues sv = shape_functions(space.degree(), rule.points[q], g);
      const auto [e0, e1] = integrand(c, g.map(rule.points[q]), sv);
      const double w = rule.weights[q] * 2.0 * g.area;
      l2 += w * e0;
      h1 += w * e1;
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

}  // namespace

ErrorNorms error_norms(const FieldCoefficients& uh, const ScalarFunction& exact, const ScalarGradient& grad,
                       double t) {
  return accumulate_errors(*uh.space, [&](int c, const Vec2& x, const ShapeValues& sv) {
    const double e = exact(x, t) - evaluate_scalar(uh, c, sv);
    Vec2 gh = Vec2::Zero();
    const auto nodes = uh.space->cell_nodes(c);
    for (int a = 0; a < sv.n; ++a) gh += uh.values[nodes[a]] * sv.grad[a];
    const Vec2 ge = grad(x, t) - gh;
    return std::pair{e * e, ge.squaredNorm()};
  });
}

ErrorNorms error_norms(const FieldCoefficients& uh, const VectorFunction& exact, const VectorGradient& grad,
                       double t) {
  return accumulate_errors(*uh.space, [&](int c, const Vec2& x, const ShapeValues& sv) {
    const Vec2 e = exact(x, t) - evaluate_vector(uh, c, sv);
    const Mat2 ge = grad(x, t) - evaluate_vector_gradient(uh, c, sv);
    return std::pair{e.squaredNorm(), ge.squaredNorm()};
  });
}

}  // namespace fpsi
