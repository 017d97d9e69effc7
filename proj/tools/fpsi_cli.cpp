// fpsi convergence|run|energy-check --config <path> [--out <dir>]

#include "fpsi/driver.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Nitsche coupling of Navier-Stokes flow with a generalized poroelastic medium"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key = value configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    return sub;
  };
  CLI::App* convergence = add("convergence", "manufactured-solution error table and rates");
  CLI::App* run = add("run", "time-dependent run with optional VTK dumps");
  CLI::App* energy = add("energy-check", "discrete energy trace under zero forcing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fpsi::kExitConfig;
  }

  try {
    fpsi::RunConfig config = fpsi::parse_config(config_path);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (convergence->parsed()) return fpsi::cmd_convergence(config, std::cout);
    if (run->parsed()) return fpsi::cmd_run(config, std::cout);
    if (energy->parsed()) return fpsi::cmd_energy_check(config, std::cout);
  } catch (const fpsi::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return fpsi::kExitConfig;
  } catch (const fpsi::MeshError& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return fpsi::kExitConfig;
  } catch (const fpsi::OracleMismatch& e) {
    std::cerr << "oracle mismatch: " << e.what() << '\n';
    return fpsi::kExitSolver;
  } catch (const fpsi::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return fpsi::kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fpsi::kExitSolver;
  }
  return fpsi::kExitConfig;
}
