#include "fpsi/mesh.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace fpsi {

namespace {

std::string next_line(std::istream& in, const char* context) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return line;
  }
  throw MeshError(std::string("unexpected end of file while reading ") + context);
}

void expect_end(std::istream& in, const std::string& section) {
  const std::string line = next_line(in, section.c_str());
  if (line.rfind("$End" + section, 0) != 0) {
    throw MeshError("expected $End" + section + ", found '" + line + "'");
  }
}

}  // namespace

Mesh parse_msh(std::istream& in, const TagMap& tag_map, std::vector<std::string>* warnings) {
  bool have_format = false;
  bool have_nodes = false;
  bool have_elements = false;
  std::map<int, std::string> names;
  std::unordered_map<long, int> node_index;
  std::vector<Vec2> vertices;
  struct RawElement {
    int type;
    int physical;
    std::vector<long> nodes;
  };
  std::vector<RawElement> elements;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] != '$') throw MeshError("unexpected content outside a section: '" + line + "'");
    const std::string section = line.substr(1);
    if (section == "MeshFormat") {
      std::istringstream s(next_line(in, "MeshFormat"));
      std::string version;
      int file_type = -1, data_size = 0;
      s >> version >> file_type >> data_size;
      if (version != "2.2" || file_type != 0) {
        throw MeshError("unsupported MSH version '" + version + "' (file type " +
                        std::to_string(file_type) + "); only ASCII 2.2 is read");
      }
      expect_end(in, "MeshFormat");
      have_format = true;
    } else if (section == "PhysicalNames") {
      const int n = std::stoi(next_line(in, "PhysicalNames"));
      for (int i = 0; i < n; ++i) {
        std::istringstream s(next_line(in, "PhysicalNames"));
        int dim = 0, id = 0;
        std::string name;
        s >> dim >> id;
        std::getline(s >> std::ws, name);
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"') {
          name = name.substr(1, name.size() - 2);
        }
        names[id] = name;
      }
      expect_end(in, "PhysicalNames");
    } else if (section == "Nodes") {
      const int n = std::stoi(next_line(in, "Nodes"));
      vertices.reserve(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        std::istringstream s(next_line(in, "Nodes"));
        long id = 0;
        double x = 0, y = 0, z = 0;
        if (!(s >> id >> x >> y >> z)) throw MeshError("malformed node line");
        node_index[id] = static_cast<int>(vertices.size());
        vertices.emplace_back(x, y);
      }
      expect_end(in, "Nodes");
      have_nodes = true;
    } else if (section == "Elements") {
      const int n = std::stoi(next_line(in, "Elements"));
      for (int i = 0; i < n; ++i) {
        std::istringstream s(next_line(in, "Elements"));
        long id = 0;
        int type = 0, ntags = 0;
        if (!(s >> id >> type >> ntags)) throw MeshError("malformed element line");
        std::vector<int> tags(static_cast<std::size_t>(ntags));
        for (auto& t : tags) s >> t;
        int nn = 0;
        if (type == 1) nn = 2;
        else if (type == 2) nn = 3;
        else if (type == 15) continue;  // points
        else throw MeshError("unsupported element type " + std::to_string(type) + " (element " +
                             std::to_string(id) + ")");
        RawElement e{type, ntags > 0 ? tags[0] : -1, std::vector<long>(static_cast<std::size_t>(nn))};
        for (auto& v : e.nodes) {
          if (!(s >> v)) throw MeshError("element " + std::to_string(id) + " lists too few nodes");
        }
        elements.push_back(std::move(e));
      }
      expect_end(in, "Elements");
      have_elements = true;
    } else {
      if (warnings) warnings->push_back("ignored section $" + section);
      std::string skip;
      const std::string end = "$End" + section;
      bool closed = false;
      while (std::getline(in, skip)) {
        if (!skip.empty() && skip.back() == '\r') skip.pop_back();
        if (skip.rfind(end, 0) == 0) {
          closed = true;
          break;
        }
      }
      if (!closed) throw MeshError("section $" + section + " is not terminated");
    }
  }
  if (!have_format) throw MeshError("parse error: no $MeshFormat section");
  if (!have_nodes || !have_elements) throw MeshError("parse error: missing $Nodes or $Elements");

  auto physical_key = [&](int id) {
    auto it = names.find(id);
    return it != names.end() ? it->second : std::to_string(id);
  };
  auto local = [&](long id) {
    auto it = node_index.find(id);
    if (it == node_index.end()) throw MeshError("element references unknown node " + std::to_string(id));
    return it->second;
  };

  std::vector<Cell> cells;
  std::map<Mesh::EdgeKey, FacetTag> tags;
  for (const auto& e : elements) {
    const std::string key = physical_key(e.physical);
    if (e.type == 2) {
      auto it = tag_map.cells.find(key);
      if (it == tag_map.cells.end()) throw MeshError("missing physical tag '" + key + "' for triangles");
      cells.push_back({{local(e.nodes[0]), local(e.nodes[1]), local(e.nodes[2])}, it->second});
    } else {
      auto it = tag_map.facets.find(key);
      if (it == tag_map.facets.end()) throw MeshError("missing physical tag '" + key + "' for lines");
      tags[Mesh::key(local(e.nodes[0]), local(e.nodes[1]))] = it->second;
    }
  }
  if (cells.empty()) throw MeshError("parse error: file contains no triangles");
  return Mesh(std::move(vertices), std::move(cells), tags);
}

Mesh import_msh(const std::filesystem::path& path, const TagMap& tag_map,
                std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path.string());
  return parse_msh(in, tag_map, warnings);
}

}  // namespace fpsi
