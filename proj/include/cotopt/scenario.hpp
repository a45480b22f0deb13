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

#ifndef COTOPT_SCENARIO_HPP_
#define COTOPT_SCENARIO_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cotopt/oracles.hpp"

namespace cotopt {

struct ScenarioConfig {
  std::string scenario = "pointmass-rail";
  std::string model;  // builtin model set; defaults to the scenario name
  std::string path;   // catalog name or "csv:<file>"; empty = scenario default
  int grid = 50;
  std::string mode = "rigid";  // rigid | frictional | fixed:pinv | fixed:single:<i>
  double sdot0 = 0.0;
  double sdotT = 0.0;
  std::optional<std::vector<VecX>> torque_lower, torque_upper, velocity;
  std::optional<std::vector<ContactModel>> contacts;
  std::optional<std::vector<VecX>> ik_hints;
  SolverSettings solver;
  double active_tol = 1e-3;
  std::string output_dir = "out";
  unsigned int seed = 0;
};

ScenarioConfig load_scenario_config(const std::string& filename);
/// Resolved config in a fixed field order; input to the config hash.
std::string canonical_config_string(const ScenarioConfig& config);
std::string config_hash(const ScenarioConfig& config);
std::vector<std::string> builtin_scenario_names();

/// Instantiated models of a scenario.
struct ScenarioSystem {
  std::vector<std::shared_ptr<Manipulator>> robots;
  RigidObjectModel object;
  std::vector<ContactModel> contacts;
  std::vector<VecX> ik_hints;
  std::string default_path;

  std::vector<const Manipulator*> robot_ptrs() const;
};

ScenarioSystem make_system(const ScenarioConfig& config);

/// One full pipeline pass (no file output): sweep, coefficients, build,
/// static screen, solve, recover, audit.
struct RunResult {
  TrajectorySolution solution;
  AuditReport audit;
  ActiveConstraintReport active;
  double assembly_time_s = 0.0;
  double solve_time_s = 0.0;
  std::string path_name;
};

RunResult run_pipeline(const ScenarioConfig& config);

struct RunManifest {
  std::string tool_version;
  std::string config_hash;
  std::string timestamp;
  std::string scenario, path, mode;
  int grid = 0;
  double total_time = 0.0;
  std::string solver_status;
  bool audit_pass = false;
  std::vector<std::string> outputs;
};

/// Full run with file outputs: solution CSV, audit CSV, gnuplot script and a
/// YAML manifest under config.output_dir. Throws AuditError when the audit
/// fails.
RunManifest run_scenario(const ScenarioConfig& config);
void write_manifest(const std::string& filename, const RunManifest& manifest);

struct CompareCell {
  bool feasible = false;
  double total_time = 0.0;
  std::string note;  // failure stage for infeasible cells
};

struct CompareTable {
  std::vector<std::string> paths;
  std::vector<std::string> modes;
  std::vector<std::vector<CompareCell>> cells;  // [path][mode]
  bool rigid_minimal = true;  // rigid column <= every other feasible column
};

/// Solves path x mode combinations concurrently (one solve per worker) and
/// merges deterministically in path order.
CompareTable compare_scenarios(const ScenarioConfig& config,
                               const std::vector<std::string>& paths,
                               const std::vector<std::string>& modes);
void write_compare_csv(const std::string& filename, const CompareTable& table);
std::string format_compare_table(const CompareTable& table);

struct BenchRow {
  int grid = 0;
  double assembly_time_s = 0.0;
  double solve_time_s = 0.0;
  double total_time = 0.0;
};

struct BenchTable {
  std::vector<BenchRow> rows;
  double assembly_loglog_slope = 0.0;  // fitted exponent of assembly time vs K
};

BenchTable bench_scenario(const ScenarioConfig& config, const std::vector<int>& grids);
void write_bench_csv(const std::string& filename, const BenchTable& table);
std::string format_bench_table(const BenchTable& table);

/// gnuplot script plotting joint torques and velocities against s.
void write_gnuplot_script(const std::string& filename, const std::string& csv_file,
                          const TrajectorySolution& solution);

}  // namespace cotopt

#endif  // COTOPT_SCENARIO_HPP_
