// Copyright 2026 The cotopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "cotopt/scenario.hpp"

namespace {

int exit_code_for(const cotopt::Error& e) {
  using cotopt::Stage;
  switch (e.stage()) {
    case Stage::config: return 2;
    case Stage::model: return 2;
    case Stage::kinematics: return 3;
    case Stage::coefficients: return 3;
    case Stage::build: return 5;
    case Stage::solve: return dynamic_cast<const cotopt::InfeasibleError*>(&e) ? 4 : 5;
    case Stage::audit: return 6;
    case Stage::io: return 2;
  }
  return 1;
}

cotopt::ScenarioConfig base_config(const std::string& scenario, const std::string& path,
                                   const std::string& mode, int grid, const std::string& out,
                                   double solver_tol, double active_tol, unsigned int seed) {
  cotopt::ScenarioConfig config;
  if (std::filesystem::exists(scenario)) {
    config = cotopt::load_scenario_config(scenario);
  } else {
    config.scenario = scenario;
  }
  if (!path.empty()) config.path = path;
  if (!mode.empty()) config.mode = mode;
  if (grid > 0) config.grid = grid;
  if (!out.empty()) config.output_dir = out;
  if (solver_tol > 0.0) {
    config.solver.feastol = solver_tol;
    config.solver.abstol = solver_tol;
    config.solver.reltol = solver_tol;
  }
  if (active_tol > 0.0) config.active_tol = active_tol;
  config.seed = seed;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cotopt: time-optimal path tracking for cooperating manipulators"};
  app.require_subcommand(1);

  std::string scenario = "pointmass-rail";
  std::string path, mode, out;
  int grid = 0;
  double solver_tol = 0.0, active_tol = 0.0;
  unsigned int seed = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "builtin scenario name or YAML config file");
    cmd->add_option("--path", path, "path name (P.1..P.5, rail-line, planar-arc, csv:<file>)");
    cmd->add_option("--grid", grid, "number of grid intervals K");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--solver-tol", solver_tol, "solver feasibility/gap tolerance");
    cmd->add_option("--active-tol", active_tol, "active-constraint relative tolerance");
    cmd->add_option("--seed", seed, "seed for randomized property suites");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "solve one scenario and export results");
  add_common(run_cmd);
  run_cmd->add_option("--mode", mode, "rigid | frictional | fixed:pinv | fixed:single:<i>");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "solve several paths and modes, tabulate T");
  add_common(compare_cmd);
  std::vector<std::string> compare_paths{"P.1", "P.2", "P.3", "P.4", "P.5"};
  std::vector<std::string> compare_modes{"rigid", "frictional", "fixed:pinv"};
  compare_cmd->add_option("--paths", compare_paths, "paths to compare");
  compare_cmd->add_option("--modes", compare_modes, "modes to compare");

  CLI::App* bench_cmd = app.add_subcommand("bench", "assembly/solve timing over grid sizes");
  add_common(bench_cmd);
  bench_cmd->add_option("--mode", mode, "mode to benchmark");
  std::vector<int> bench_grids{30, 100, 300, 1000};
  bench_cmd->add_option("--grids", bench_grids, "grid sizes K");

  CLI11_PARSE(app, argc, argv);

  try {
    const cotopt::ScenarioConfig config =
        base_config(scenario, path, mode, grid, out, solver_tol, active_tol, seed);

    if (run_cmd->parsed()) {
      const cotopt::RunManifest manifest = cotopt::run_scenario(config);
      std::cout << "scenario " << manifest.scenario << " path " << manifest.path << " mode "
                << manifest.mode << " K " << manifest.grid << "\n";
      std::cout << "T = " << manifest.total_time << " s (" << manifest.solver_status << ")\n";
      std::cout << "audit: " << (manifest.audit_pass ? "PASS" : "FAIL") << "\n";
      std::cout << "outputs:\n";
      for (const auto& o : manifest.outputs) std::cout << "  " << o << "\n";
    } else if (compare_cmd->parsed()) {
      const cotopt::CompareTable table =
          cotopt::compare_scenarios(config, compare_paths, compare_modes);
      std::cout << cotopt::format_compare_table(table);
      std::filesystem::create_directories(config.output_dir);
      const std::string csv =
          (std::filesystem::path(config.output_dir) / (config.scenario + "_compare.csv"))
              .string();
      cotopt::write_compare_csv(csv, table);
      std::cout << "written " << csv << "\n";
    } else if (bench_cmd->parsed()) {
      const cotopt::BenchTable table = cotopt::bench_scenario(config, bench_grids);
      std::cout << cotopt::format_bench_table(table);
      std::filesystem::create_directories(config.output_dir);
      const std::string csv =
          (std::filesystem::path(config.output_dir) / (config.scenario + "_bench.csv")).string();
      cotopt::write_bench_csv(csv, table);
      std::cout << "written " << csv << "\n";
    }
  } catch (const cotopt::Error& e) {
    std::cerr << "error [" << cotopt::stage_name(e.stage()) << "]: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
