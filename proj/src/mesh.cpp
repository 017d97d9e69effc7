#include "fpsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fpsi {

const char* to_string(Subdomain s) {
  return s == Subdomain::Fluid ? "fluid" : "poro";
}

const char* to_string(FacetTag t) {
  switch (t) {
    case FacetTag::Interior: return "interior";
    case FacetTag::FluidWall: return "gamma_s";
    case FacetTag::FluidOutflow: return "gamma_s_n";
    case FacetTag::PoroDirichlet: return "gamma_p_d";
    case FacetTag::PoroNeumann: return "gamma_p_n";
    case FacetTag::Sigma: return "sigma";
  }
  return "?";
}

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<Cell> cells,
           const std::map<EdgeKey, FacetTag>& tags)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = num_vertices();
  for (int c = 0; c < num_cells(); ++c) {
    auto& cell = cells_[c];
    for (int v : cell.vertices) {
      if (v < 0 || v >= nv) {
        throw MeshError("cell " + std::to_string(c) + " references vertex " + std::to_string(v) +
                        " outside [0, " + std::to_string(nv) + ")");
      }
    }
    const double a = signed_area(vertices_[cell.vertices[0]], vertices_[cell.vertices[1]],
                                 vertices_[cell.vertices[2]]);
    const double scale = (vertices_[cell.vertices[1]] - vertices_[cell.vertices[0]]).squaredNorm() +
                         (vertices_[cell.vertices[2]] - vertices_[cell.vertices[0]]).squaredNorm();
    if (std::abs(a) <= 1e-14 * scale) {
      throw MeshError("cell " + std::to_string(c) + " is degenerate (zero area)");
    }
    if (a < 0) std::swap(cell.vertices[1], cell.vertices[2]);
  }

  std::map<EdgeKey, int> edge_ids;
  cell_facets_.resize(cells_.size());
  for (int c = 0; c < num_cells(); ++c) {
    const auto& v = cells_[c].vertices;
    for (int i = 0; i < 3; ++i) {
      const int a = v[(i + 1) % 3];
      const int b = v[(i + 2) % 3];
      auto [it, inserted] = edge_ids.try_emplace(key(a, b), num_facets());
      if (inserted) {
        Facet f;
        f.vertices = {a, b};
        f.cells = {c, -1};
        facets_.push_back(f);
      } else {
        auto& f = facets_[it->second];
        if (f.cells[1] != -1) {
          throw MeshError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") is shared by more than two cells");
        }
        f.cells[1] = c;
      }
      cell_facets_[c][i] = it->second;
    }
  }

  for (const auto& [k, tag] : tags) {
    auto it = edge_ids.find(k);
    if (it == edge_ids.end()) {
      throw MeshError("dangling facet: tagged edge (" + std::to_string(k.first) + ", " +
                      std::to_string(k.second) + ") is not an edge of any cell");
    }
    facets_[it->second].tag = tag;
  }

  for (int f = 0; f < num_facets(); ++f) {
    auto& facet = facets_[f];
    const bool boundary = facet.cells[1] == -1;
    const std::string where = "facet " + std::to_string(f) + " (" +
                              std::to_string(facet.vertices[0]) + ", " +
                              std::to_string(facet.vertices[1]) + ")";
    if (facet.tag == FacetTag::Sigma) {
      if (boundary) throw MeshError("non-conforming interface: Sigma " + where + " borders one cell");
      const auto s0 = cells_[facet.cells[0]].subdomain;
      const auto s1 = cells_[facet.cells[1]].subdomain;
      if (s0 == s1) {
        throw MeshError("non-conforming interface: Sigma " + where + " borders two " +
                        to_string(s0) + " cells");
      }
      if (s0 == Subdomain::Poro) std::swap(facet.cells[0], facet.cells[1]);
    } else if (boundary) {
      if (facet.tag == FacetTag::Interior) throw MeshError("missing physical tag on boundary " + where);
      const auto side = cells_[facet.cells[0]].subdomain;
      const bool fluid_tag = facet.tag == FacetTag::FluidWall || facet.tag == FacetTag::FluidOutflow;
      if (fluid_tag != (side == Subdomain::Fluid)) {
        throw MeshError(std::string("boundary ") + where + " tagged " + to_string(facet.tag) +
                        " lies on the " + to_string(side) + " subdomain");
      }
    } else {
      const auto s0 = cells_[facet.cells[0]].subdomain;
      const auto s1 = cells_[facet.cells[1]].subdomain;
      if (s0 != s1) throw MeshError("missing Sigma tag on subdomain-separating " + where);
      if (facet.tag != FacetTag::Interior) {
        throw MeshError(std::string("interior ") + where + " carries boundary tag " + to_string(facet.tag));
      }
    }
  }
}

double Mesh::cell_area(int cell) const {
  const auto& v = cells_[cell].vertices;
  return signed_area(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]);
}

double Mesh::cell_diameter(int cell) const {
  const auto& v = cells_[cell].vertices;
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d = std::max(d, (vertices_[v[i]] - vertices_[v[(i + 1) % 3]]).norm());
  return d;
}

double Mesh::facet_length(int facet) const {
  const auto& f = facets_[facet];
  return (vertices_[f.vertices[1]] - vertices_[f.vertices[0]]).norm();
}

Vec2 Mesh::facet_midpoint(int facet) const {
  const auto& f = facets_[facet];
  return 0.5 * (vertices_[f.vertices[0]] + vertices_[f.vertices[1]]);
}

Vec2 Mesh::outward_normal(int facet, int cell) const {
  const int e = local_edge(cell, facet);
  const auto& v = cells_[cell].vertices;
  const Vec2 d = vertices_[v[(e + 2) % 3]] - vertices_[v[(e + 1) % 3]];
  // counterclockwise cell: the outward normal of edge a->b is the edge rotated clockwise
  return Vec2(d.y(), -d.x()).normalized();
}

int Mesh::local_edge(int cell, int facet) const {
  const auto& cf = cell_facets_[cell];
  for (int i = 0; i < 3; ++i) {
    if (cf[i] == facet) return i;
  }
  throw MeshError("facet " + std::to_string(facet) + " is not an edge of cell " + std::to_string(cell));
}

double Mesh::subdomain_area(Subdomain s) const {
  double a = 0.0;
  for (int c = 0; c < num_cells(); ++c) {
    if (cells_[c].subdomain == s) a += cell_area(c);
  }
  return a;
}

double Mesh::max_cell_diameter() const {
  double h = 0.0;
  for (int c = 0; c < num_cells(); ++c) h = std::max(h, cell_diameter(c));
  return h;
}

std::vector<int> Mesh::facets_with_tag(FacetTag tag) const {
  std::vector<int> out;
  for (int f = 0; f < num_facets(); ++f) {
    if (facets_[f].tag == tag) out.push_back(f);
  }
  return out;
}

StructuredGeometry StructuredGeometry::channel(double length, double y_min, double y_max,
                                               double layer) {
  StructuredGeometry g;
  g.x_min = 0.0;
  g.x_max = length;
  g.y_min = y_min;
  g.y_max = y_max;
  g.breaks = {y_min + layer, y_max - layer};
  g.layers = {Subdomain::Poro, Subdomain::Fluid, Subdomain::Poro};
  return g;
}

FacetTag default_boundary_rule(const Vec2&, const Vec2&, Subdomain side) {
  return side == Subdomain::Fluid ? FacetTag::FluidWall : FacetTag::PoroDirichlet;
}

Mesh generate_structured(int nx, int ny, const StructuredGeometry& g, const BoundaryRule& rule) {
  if (nx < 1 || ny < 1) throw MeshError("structured grid needs nx, ny >= 1");
  if (!(g.x_max > g.x_min) || !(g.y_max > g.y_min)) {
    throw MeshError("degenerate geometry: zero width or height");
  }
  if (g.layers.size() != g.breaks.size() + 1) {
    throw MeshError("structured geometry needs one more layer than breaks");
  }
  const double dx = (g.x_max - g.x_min) / nx;
  const double dy = (g.y_max - g.y_min) / ny;
  std::vector<int> break_rows;
  for (double b : g.breaks) {
    const double r = (b - g.y_min) / dy;
    const double rr = std::round(r);
    if (std::abs(r - rr) > 1e-9 || rr <= 0 || rr >= ny) {
      if (g.breaks.size() == 1 && std::abs(b - 0.5 * (g.y_min + g.y_max)) < 1e-12 && ny % 2 != 0) {
        throw MeshError("ny = " + std::to_string(ny) +
                        " is odd: the interface at the mid-height must be a grid line");
      }
      std::ostringstream msg;
      msg << "layer break y = " << b << " is not a grid line for ny = " << ny;
      throw MeshError(msg.str());
    }
    break_rows.push_back(static_cast<int>(rr));
  }
  if (!std::is_sorted(break_rows.begin(), break_rows.end())) {
    throw MeshError("layer breaks must be increasing");
  }

  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    // exact endpoints so refinement levels share coordinates bit-for-bit
    const double y = j == ny ? g.y_max : g.y_min + j * dy;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? g.x_max : g.x_min + i * dx;
      vertices.emplace_back(x, y);
    }
  }
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  auto layer_of_row = [&](int j) {
    std::size_t l = 0;
    while (l < break_rows.size() && j >= break_rows[l]) ++l;
    return g.layers[l];
  };

  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    const Subdomain s = layer_of_row(j);
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      cells.push_back({{v00, v10, v11}, s});
      cells.push_back({{v00, v11, v01}, s});
    }
  }

  std::map<Mesh::EdgeKey, FacetTag> tags;
  auto tag_boundary = [&](int a, int b, Subdomain side, const Vec2& normal) {
    const Vec2 mid = 0.5 * (vertices[a] + vertices[b]);
    tags[Mesh::key(a, b)] = rule(mid, normal, side);
  };
  for (int i = 0; i < nx; ++i) {
    tag_boundary(vid(i, 0), vid(i + 1, 0), layer_of_row(0), Vec2(0, -1));
    tag_boundary(vid(i, ny), vid(i + 1, ny), layer_of_row(ny - 1), Vec2(0, 1));
  }
  for (int j = 0; j < ny; ++j) {
    tag_boundary(vid(0, j), vid(0, j + 1), layer_of_row(j), Vec2(-1, 0));
    tag_boundary(vid(nx, j), vid(nx, j + 1), layer_of_row(j), Vec2(1, 0));
  }
  for (int r : break_rows) {
    if (layer_of_row(r - 1) == layer_of_row(r)) continue;
    for (int i = 0; i < nx; ++i) tags[Mesh::key(vid(i, r), vid(i + 1, r))] = FacetTag::Sigma;
  }
  return Mesh(std::move(vertices), std::move(cells), tags);
}

std::vector<InterfaceFacetPair> interface_pairs(const Mesh& mesh, const TensorFunction& kappa) {
  std::vector<InterfaceFacetPair> pairs;
  for (int f : mesh.facets_with_tag(FacetTag::Sigma)) {
    const auto& facet = mesh.facets()[f];
    InterfaceFacetPair p;
    p.facet = f;
    p.fluid_cell = facet.cells[0];
    p.poro_cell = facet.cells[1];
    p.endpoints = {mesh.vertices()[facet.vertices[0]], mesh.vertices()[facet.vertices[1]]};
    p.h = mesh.facet_length(f);
    p.normal_fluid = mesh.outward_normal(f, p.fluid_cell);
    p.normal_poro = -p.normal_fluid;
    p.tangent = Vec2(p.normal_fluid.y(), -p.normal_fluid.x());
    const Mat2 k = kappa(mesh.facet_midpoint(f));
    p.z = p.tangent.dot(k * p.tangent);
    if (!(p.z > 0.0)) {
      throw Error("permeability is not positive along the interface tangent at facet " +
                  std::to_string(f));
    }
    pairs.push_back(p);
  }
  return pairs;
}

std::vector<InterfaceFacetPair> interface_pairs(const Mesh& mesh) {
  return interface_pairs(mesh, [](const Vec2&) { return Mat2::Identity().eval(); });
}

}  // namespace fpsi
