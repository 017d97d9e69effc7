#pragma once

#include "fpsi/block_system.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fpsi {

/// One point-data array; `values` holds components() entries per mesh vertex.
struct PointArray {
  std::string name;
  int components = 1;  // 1 (SCALARS) or 2 (written as 3-component VECTORS)
  std::vector<double> values;
};

/// Vertex samples of all fields at one time. Vertices outside a field's
/// subdomain carry zeros; P2 fields are sampled at vertices only.
struct FieldDump {
  double time = 0.0;
  std::vector<PointArray> arrays;
};

FieldDump sample_state(const StateVector& state);

/// Legacy ASCII VTK unstructured grid with triangles, the subdomain as cell
/// data and every dump array as point data. Throws Error on I/O failure.
void write_vtk(const Mesh& mesh, const FieldDump& dump, const std::filesystem::path& path);

}  // namespace fpsi
