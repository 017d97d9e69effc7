#include "fpsi/config.hpp"

#include "fpsi/solver.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace fpsi {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::vector<std::string> kKeys{
    "mode",
    "mesh.geometry", "mesh.nx", "mesh.ny", "mesh.length", "mesh.y_min", "mesh.y_max", "mesh.layer", "mesh.file",
    "physics.preset", "physics.rho_f", "physics.rho_s", "physics.mu_f", "physics.mu_p", "physics.lambda_p",
    "physics.K", "physics.alpha_bjs", "physics.phi", "physics.kappa", "physics.kappa_xx", "physics.kappa_xy",
    "physics.kappa_yy", "physics.theta",
    "nitsche.gamma", "nitsche.varsigma",
    "time.tau", "time.final", "time.tau_per_h",
    "convergence.levels", "convergence.min_rate_velocity", "convergence.min_rate_pressure",
    "flow.convection", "flow.inflow",
    "forcing.f_s", "forcing.f_p",
    "initial.state", "initial.seed",
    "energy.slack",
    "output.dir", "output.dump_every",
    "solver.tolerance",
};
// Physical-group names of imported meshes: mesh.cell.<name>, mesh.facet.<name>.
constexpr std::string_view kCellPrefix = "mesh.cell.";
constexpr std::string_view kFacetPrefix = "mesh.facet.";

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::string source)
      : entries_(std::move(entries)), source_(std::move(source)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const auto it = entries_.find(key);
    std::ostringstream s;
    s << source_;
    if (it != entries_.end()) s << ":" << it->second.line;
    s << ": " << key << ": " << what;
    throw ConfigError(s.str());
  }

  const std::string& raw(const std::string& key) const { return entries_.at(key).value; }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_double(key, raw(key));
  }
  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = raw(key);
    long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) fail(key, "expected an integer, got '" + v + "'");
    return out;
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = raw(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(key, "expected true or false, got '" + v + "'");
  }
  std::string choice(const std::string& key, const std::string& fallback, std::initializer_list<const char*> allowed) const {
    if (!has(key)) return fallback;
    const std::string& v = raw(key);
    for (const char* a : allowed)
      if (v == a) return v;
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    fail(key, "'" + v + "' is not one of " + list);
  }
  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    std::stringstream s(raw(key));
    std::string item;
    while (std::getline(s, item, ',')) out.push_back(parse_double(key, trim(item)));
    return out;
  }
  Vec2 vec2(const std::string& key) const {
    const auto v = numbers(key);
    if (v.size() != 2) fail(key, "expected two comma-separated numbers");
    return {v[0], v[1]};
  }

  /// Keys starting with `prefix`, with the prefix stripped.
  std::map<std::string, std::string> with_prefix(std::string_view prefix) const {
    std::map<std::string, std::string> out;
    for (const auto& [k, e] : entries_)
      if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0) out[k.substr(prefix.size())] = e.value;
    return out;
  }

 private:
  double parse_double(const std::string& key, const std::string& v) const {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty()) fail(key, "expected a number, got '" + v + "'");
    return out;
  }

  std::map<std::string, Entry> entries_;
  std::string source_;
};

std::map<std::string, Entry> tokenize(std::string_view text, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    auto where = [&] { return source + ":" + std::to_string(number) + ": "; };
    if (eq == std::string::npos) throw ConfigError(where() + "expected 'key = value', got '" + content + "'");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) throw ConfigError(where() + "missing key before '='");
    const bool known = std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end() ||
                       key.rfind(kCellPrefix, 0) == 0 || key.rfind(kFacetPrefix, 0) == 0;
    if (!known) throw ConfigError(where() + key + ": unknown key");
    if (value.empty()) throw ConfigError(where() + key + ": missing value");
    if (!entries.emplace(key, Entry{value, number}).second) throw ConfigError(where() + key + ": duplicate key");
  }
  return entries;
}

FacetTag facet_tag_from(const Reader& r, const std::string& key, const std::string& v) {
  if (v == "fluid_wall") return FacetTag::FluidWall;
  if (v == "fluid_outflow") return FacetTag::FluidOutflow;
  if (v == "poro_dirichlet") return FacetTag::PoroDirichlet;
  if (v == "poro_neumann") return FacetTag::PoroNeumann;
  if (v == "sigma") return FacetTag::Sigma;
  r.fail(key, "'" + v + "' is not one of fluid_wall, fluid_outflow, poro_dirichlet, poro_neumann, sigma");
}

}  // namespace

const std::vector<std::string>& known_config_keys() { return kKeys; }

RunConfig parse_config_text(std::string_view text, const std::string& source) {
  const Reader r(tokenize(text, source), source);
  RunConfig c;

  c.mode = r.choice("mode", "manufactured", {"manufactured", "general"}) == "manufactured" ? RunMode::Manufactured
                                                                                            : RunMode::General;

  // mesh
  const std::string geometry = r.choice("mesh.geometry", "unit_square", {"unit_square", "channel", "file"});
  MeshSource& m = c.mesh;
  m.kind = geometry == "unit_square" ? MeshSource::Kind::UnitSquare
           : geometry == "channel"   ? MeshSource::Kind::Channel
                                     : MeshSource::Kind::File;
  if (m.kind == MeshSource::Kind::Channel) {
    m.nx = 20;
    m.ny = 14;
  }
  m.nx = static_cast<int>(r.integer("mesh.nx", m.nx));
  m.ny = static_cast<int>(r.integer("mesh.ny", m.ny));
  if (m.nx < 1) r.fail("mesh.nx", "violates nx >= 1");
  if (m.ny < 1) r.fail("mesh.ny", "violates ny >= 1");
  if (m.kind == MeshSource::Kind::UnitSquare && m.ny % 2 != 0) {
    r.fail("mesh.ny", "must be even so the interface y = 1/2 is a grid line");
  }
  m.length = r.number("mesh.length", m.length);
  m.y_min = r.number("mesh.y_min", m.y_min);
  m.y_max = r.number("mesh.y_max", m.y_max);
  m.layer = r.number("mesh.layer", m.layer);
  if (!(m.length > 0.0)) r.fail("mesh.length", "violates length > 0");
  if (!(m.layer > 0.0) || !(2.0 * m.layer < m.y_max - m.y_min)) {
    r.fail("mesh.layer", "violates 0 < layer < (y_max - y_min) / 2");
  }
  if (m.kind == MeshSource::Kind::File) {
    if (!r.has("mesh.file")) r.fail("mesh.geometry", "geometry 'file' requires mesh.file");
    std::filesystem::path p = r.raw("mesh.file");
    if (p.is_relative() && source.front() != '<') p = std::filesystem::path(source).parent_path() / p;
    if (!std::filesystem::exists(p)) r.fail("mesh.file", "file '" + p.string() + "' does not exist");
    m.file = p;
    for (const auto& [name, v] : r.with_prefix(kCellPrefix)) {
      const std::string key = std::string(kCellPrefix) + name;
      if (v == "fluid") m.tags.cells[name] = Subdomain::Fluid;
      else if (v == "poro") m.tags.cells[name] = Subdomain::Poro;
      else r.fail(key, "'" + v + "' is not one of fluid, poro");
    }
    for (const auto& [name, v] : r.with_prefix(kFacetPrefix)) {
      m.tags.facets[name] = facet_tag_from(r, std::string(kFacetPrefix) + name, v);
    }
  } else if (r.has("mesh.file")) {
    r.fail("mesh.file", "only used with mesh.geometry = file");
  }

  // physics: preset first, then individual overrides
  const std::string preset = r.choice("physics.preset", "manufactured", {"manufactured", "channel"});
  PhysicalParams& p = c.params;
  p = preset == "channel" ? PhysicalParams::channel() : PhysicalParams::manufactured();
  p.rho_f = r.number("physics.rho_f", p.rho_f);
  p.rho_s = r.number("physics.rho_s", p.rho_s);
  p.mu_f = r.number("physics.mu_f", p.mu_f);
  p.mu_p = r.number("physics.mu_p", p.mu_p);
  p.lambda_p = r.number("physics.lambda_p", p.lambda_p);
  p.bulk_modulus = r.number("physics.K", p.bulk_modulus);
  p.alpha_bjs = r.number("physics.alpha_bjs", p.alpha_bjs);
  if (r.has("physics.phi")) p.phi = ScalarCoefficient::constant(r.number("physics.phi", 0.0));
  if (r.has("physics.theta")) p.theta = ScalarCoefficient::constant(r.number("physics.theta", 0.0));
  const bool components = r.has("physics.kappa_xx") || r.has("physics.kappa_xy") || r.has("physics.kappa_yy");
  if (r.has("physics.kappa") && components) {
    r.fail("physics.kappa", "give either physics.kappa or its components, not both");
  }
  if (r.has("physics.kappa")) p.kappa = TensorCoefficient::isotropic(r.number("physics.kappa", 1.0));
  if (components) {
    const Mat2 k0 = p.kappa(Vec2::Zero());
    Mat2 k;
    const double xy = r.number("physics.kappa_xy", k0(0, 1));
    k << r.number("physics.kappa_xx", k0(0, 0)), xy, xy, r.number("physics.kappa_yy", k0(1, 1));
    p.kappa = TensorCoefficient::constant(k);
  }
  p.validate();

  c.nitsche.gamma = r.number("nitsche.gamma", preset == "channel" ? 30.0 : 40.0);
  c.nitsche.varsigma = static_cast<int>(r.integer("nitsche.varsigma", 1));
  c.nitsche.validate();

  // time
  c.tau = r.number("time.tau", c.tau);
  c.final_time = r.number("time.final", c.mode == RunMode::General && preset == "channel" ? 0.1 : c.final_time);
  c.tau_per_h = r.number("time.tau_per_h", c.tau_per_h);
  if (!(c.tau_per_h > 0.0)) r.fail("time.tau_per_h", "violates tau_per_h > 0");
  TimeGrid::make(c.tau, c.final_time);

  if (r.has("convergence.levels")) {
    c.levels.clear();
    for (double v : r.numbers("convergence.levels")) {
      const int n = static_cast<int>(v);
      if (n != v || n < 2 || n % 2 != 0) r.fail("convergence.levels", "each level must be an even integer >= 2");
      if (!c.levels.empty() && n <= c.levels.back()) r.fail("convergence.levels", "levels must strictly refine");
      c.levels.push_back(n);
    }
  }
  c.min_rate_velocity = r.number("convergence.min_rate_velocity", c.min_rate_velocity);
  c.min_rate_pressure = r.number("convergence.min_rate_pressure", c.min_rate_pressure);

  c.convection = r.boolean("flow.convection", c.convection);
  c.inflow = r.choice("flow.inflow", preset == "channel" && c.mode == RunMode::General ? "channel" : "none", {"none", "channel"});
  if (r.has("forcing.f_s")) c.body_force_fluid = r.vec2("forcing.f_s");
  if (r.has("forcing.f_p")) c.body_force_poro = r.vec2("forcing.f_p");

  c.initial = r.choice("initial.state", c.mode == RunMode::Manufactured ? "exact" : "zero", {"exact", "zero", "random"});
  c.seed = static_cast<unsigned long>(r.integer("initial.seed", static_cast<long>(c.seed)));
  c.energy_slack = r.number("energy.slack", c.energy_slack);
  if (!(c.energy_slack >= 0.0)) r.fail("energy.slack", "violates slack >= 0");

  if (c.mode == RunMode::Manufactured) {
    if (m.kind != MeshSource::Kind::UnitSquare) {
      r.fail("mesh.geometry", "manufactured mode needs the unit square with the interface at y = 1/2");
    }
    if (!p.phi.is_constant()) r.fail("physics.phi", "manufactured mode needs constant porosity");
    if (c.body_force_fluid || c.body_force_poro) r.fail("mode", "forcing.* is only used in general mode");
    if (c.inflow != "none") r.fail("flow.inflow", "manufactured mode prescribes the exact boundary data");
  } else if (c.initial == "exact") {
    r.fail("initial.state", "'exact' needs mode = manufactured");
  }

  if (r.has("output.dir")) c.output_dir = r.raw("output.dir");
  c.dump_every = static_cast<int>(r.integer("output.dump_every", c.dump_every));
  if (c.dump_every < 0) r.fail("output.dump_every", "violates dump_every >= 0");
  c.solver_tolerance = r.number("solver.tolerance", c.solver_tolerance);
  if (!(c.solver_tolerance > 0.0)) r.fail("solver.tolerance", "violates tolerance > 0");
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

}  // namespace fpsi
