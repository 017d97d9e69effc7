#pragma once

#include "fpsi/mesh.hpp"
#include "fpsi/params.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpsi {

enum class RunMode { Manufactured, General };

/// Where the triangulation comes from.
struct MeshSource {
  enum class Kind { UnitSquare, Channel, File } kind = Kind::UnitSquare;
  int nx = 8;
  int ny = 8;
  // channel geometry
  double length = 2.0;
  double y_min = -0.2;
  double y_max = 1.2;
  double layer = 0.2;
  // imported mesh
  std::filesystem::path file;
  TagMap tags;
};

/// Everything a subcommand needs. Defaults reproduce the manufactured set
/// with gamma = 40.
struct RunConfig {
  RunMode mode = RunMode::Manufactured;
  MeshSource mesh;
  PhysicalParams params = PhysicalParams::manufactured();
  NitscheParams nitsche;

  double tau = 1e-3;
  double final_time = 1e-3;
  double tau_per_h = 1e-3;  // convergence: tau = h * tau_per_h
  std::vector<int> levels{2, 4, 8, 16, 32};
  double min_rate_velocity = 1.8;
  double min_rate_pressure = 1.5;

  bool convection = true;
  std::string inflow = "none";  // "none" or "channel"
  std::optional<Vec2> body_force_fluid;  // constant f_S (general mode)
  std::optional<Vec2> body_force_poro;   // constant f_P (general mode)

  std::string initial = "exact";  // exact (manufactured), zero, random
  unsigned long seed = 1;
  double energy_slack = 1e-10;

  std::filesystem::path output_dir = "fpsi_out";
  int dump_every = 0;
  double solver_tolerance = 1e-9;
};

/// Line-based `key = value` file; `#` starts a comment. Unknown keys,
/// duplicates and malformed values raise ConfigError naming the key and line.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(std::string_view text, const std::string& source = "<config>");

/// Keys accepted by parse_config, for documentation and tests.
const std::vector<std::string>& known_config_keys();

}  // namespace fpsi
