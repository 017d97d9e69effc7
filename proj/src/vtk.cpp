#include "fpsi/vtk.hpp"

#include <fstream>
#include <iomanip>

namespace fpsi {

FieldDump sample_state(const StateVector& state) {
  const Mesh& mesh = *state.spaces.mesh;
  FieldDump dump;
  dump.time = state.time;
  for (Field f : kAllFields) {
    const FunctionSpace& space = state.spaces[f];
    const auto coeffs = state.segment(f);
    PointArray a;
    a.name = to_string(f);
    a.components = space.components();
    a.values.assign(static_cast<std::size_t>(mesh.num_vertices() * a.components), 0.0);
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      const int node = space.vertex_node(v);
      if (node < 0) continue;
      for (int c = 0; c < a.components; ++c) a.values[v * a.components + c] = coeffs[space.dof(node, c)];
    }
    dump.arrays.push_back(std::move(a));
  }
  return dump;
}

void write_vtk(const Mesh& mesh, const FieldDump& dump, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write VTK file '" + path.string() + "'");
  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\n";
  out << "fpsi t=" << dump.time << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Vec2& x : mesh.vertices()) out << x.x() << ' ' << x.y() << " 0\n";
  out << "CELLS " << mesh.num_cells() << ' ' << 4 * mesh.num_cells() << '\n';
  for (const Cell& c : mesh.cells()) out << "3 " << c.vertices[0] << ' ' << c.vertices[1] << ' ' << c.vertices[2] << '\n';
  out << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (int i = 0; i < mesh.num_cells(); ++i) out << "5\n";
  out << "CELL_DATA " << mesh.num_cells() << "\nSCALARS subdomain int 1\nLOOKUP_TABLE default\n";
  for (const Cell& c : mesh.cells()) out << (c.subdomain == Subdomain::Fluid ? 0 : 1) << '\n';

  out << "POINT_DATA " << mesh.num_vertices() << '\n';
  for (const PointArray& a : dump.arrays) {
    if (a.values.size() != static_cast<std::size_t>(mesh.num_vertices() * a.components)) {
      throw Error("point array '" + a.name + "' does not match the mesh vertex count");
    }
    if (a.components == 1) {
      out << "SCALARS " << a.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : a.values) out << v << '\n';
    } else {
      out << "VECTORS " << a.name << " double\n";
      for (int v = 0; v < mesh.num_vertices(); ++v) out << a.values[2 * v] << ' ' << a.values[2 * v + 1] << " 0\n";
    }
  }
  if (!out) throw Error("I/O failure while writing '" + path.string() + "'");
}

}  // namespace fpsi
