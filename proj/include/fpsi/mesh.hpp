#pragma once

#include "fpsi/common.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fpsi {

struct Cell {
  std::array<int, 3> vertices;
  Subdomain subdomain;
};

/// Edge of the triangulation. `cells` holds the adjacent cell ids (-1 when
/// absent); for Sigma facets cells[0] is the fluid cell and cells[1] the
/// poroelastic one.
struct Facet {
  std::array<int, 2> vertices;
  FacetTag tag = FacetTag::Interior;
  std::array<int, 2> cells{-1, -1};
};

/// Conforming two-subdomain triangulation. Immutable after construction.
///
/// Local edge i of a cell is the edge opposite local vertex i, i.e. it joins
/// vertices (i+1)%3 and (i+2)%3.
class Mesh {
 public:
  using EdgeKey = std::pair<int, int>;

  /// Builds facets and adjacency from cells. `tags` assigns a tag to every
  /// boundary and interface edge (keys with the smaller vertex id first).
  /// Cells with clockwise orientation are reordered; degenerate cells,
  /// untagged boundary edges, tags on edges that do not exist and
  /// non-conforming interface facets are rejected.
  Mesh(std::vector<Vec2> vertices, std::vector<Cell> cells,
       const std::map<EdgeKey, FacetTag>& tags);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::array<int, 3>& cell_facets(int cell) const { return cell_facets_[cell]; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_facets() const { return static_cast<int>(facets_.size()); }

  double cell_area(int cell) const;
  double cell_diameter(int cell) const;
  double facet_length(int facet) const;
  Vec2 facet_midpoint(int facet) const;
  /// Unit normal of `facet` pointing out of `cell`.
  Vec2 outward_normal(int facet, int cell) const;
  /// Local edge index of `facet` within `cell`.
  int local_edge(int cell, int facet) const;

  double subdomain_area(Subdomain s) const;
  double max_cell_diameter() const;
  std::vector<int> facets_with_tag(FacetTag tag) const;

  static EdgeKey key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Cell> cells_;
  std::vector<Facet> facets_;
  std::vector<std::array<int, 3>> cell_facets_;
};

/// Axis-aligned rectangle cut into horizontal layers. `breaks` lists the
/// interior layer boundaries bottom to top; `layers` has one more entry.
struct StructuredGeometry {
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  std::vector<double> breaks{0.5};
  std::vector<Subdomain> layers{Subdomain::Fluid, Subdomain::Poro};

  /// Poroelastic layers on (y_min, y_min+layer) and (y_max-layer, y_max)
  /// around a free-flow channel.
  static StructuredGeometry channel(double length, double y_min, double y_max, double layer);
};

/// Tag for an external facet given its midpoint, outward normal and the
/// subdomain of its cell.
using BoundaryRule = std::function<FacetTag(const Vec2& midpoint, const Vec2& normal, Subdomain side)>;

/// Fluid boundary -> FluidWall, poroelastic boundary -> PoroDirichlet.
FacetTag default_boundary_rule(const Vec2& midpoint, const Vec2& normal, Subdomain side);

/// Uniform nx-by-ny grid, each quad split along its lower-left to upper-right
/// diagonal. Every layer break must coincide with a grid line.
Mesh generate_structured(int nx, int ny, const StructuredGeometry& geometry = {},
                         const BoundaryRule& rule = default_boundary_rule);

/// Physical-group resolution for imported meshes. Keys are physical names, or
/// the decimal physical id when the file has no name for it.
struct TagMap {
  std::map<std::string, Subdomain> cells;
  std::map<std::string, FacetTag> facets;
};

/// Reads a Gmsh MSH 2.2 ASCII file (triangles and lines with physical tags).
/// Sections other than $MeshFormat, $PhysicalNames, $Nodes and $Elements are
/// skipped; their names are appended to `warnings` when given.
Mesh import_msh(const std::filesystem::path& path, const TagMap& tag_map,
                std::vector<std::string>* warnings = nullptr);
Mesh parse_msh(std::istream& in, const TagMap& tag_map, std::vector<std::string>* warnings = nullptr);

/// Geometry of one interface facet seen from both sides.
struct InterfaceFacetPair {
  int facet = -1;
  int fluid_cell = -1;
  int poro_cell = -1;
  std::array<Vec2, 2> endpoints;
  double h = 0.0;
  Vec2 normal_fluid;  // n_S, out of the fluid cell
  Vec2 normal_poro;   // n_P = -n_S
  Vec2 tangent;       // unit, n_S rotated clockwise
  double z = 1.0;     // (kappa t).t at the facet midpoint
};

using TensorFunction = std::function<Mat2(const Vec2&)>;

std::vector<InterfaceFacetPair> interface_pairs(const Mesh& mesh, const TensorFunction& kappa);
std::vector<InterfaceFacetPair> interface_pairs(const Mesh& mesh);

}  // namespace fpsi
