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

#include "cotopt/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

namespace cotopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

VecX to_vec(const std::vector<double>& v) {
  return Eigen::Map<const VecX>(v.data(), static_cast<int>(v.size()));
}

JointLimits symmetric_limits(const std::vector<double>& torque,
                             const std::vector<double>& velocity) {
  JointLimits limits;
  limits.torque_upper = to_vec(torque);
  limits.torque_lower = -limits.torque_upper;
  limits.velocity = to_vec(velocity);
  return limits;
}

void apply_limit_overrides(JointLimits& limits, const ScenarioConfig& config, size_t robot) {
  if (config.torque_upper && robot < config.torque_upper->size()) {
    limits.torque_upper = (*config.torque_upper)[robot];
  }
  if (config.torque_lower && robot < config.torque_lower->size()) {
    limits.torque_lower = (*config.torque_lower)[robot];
  } else if (config.torque_upper && robot < config.torque_upper->size()) {
    limits.torque_lower = -limits.torque_upper;
  }
  if (config.velocity && robot < config.velocity->size()) {
    limits.velocity = (*config.velocity)[robot];
  }
}

// --------------------------------------------------------------------------
// Builtin systems

ScenarioSystem make_pointmass_rail(const ScenarioConfig& config) {
  ScenarioSystem system;
  system.default_path = "rail-line";

  for (int i = 0; i < 2; ++i) {
    const double side = i == 0 ? -0.05 : 0.05;
    JointLimits limits = symmetric_limits({10.0}, {100.0});
    apply_limit_overrides(limits, config, static_cast<size_t>(i));
    Pose base;
    base.position = Vec3(side, 0.0, 0.0);
    system.robots.push_back(std::make_shared<RailCarriage>(1.0, base, limits));
    system.ik_hints.push_back(VecX::Zero(1));
  }

  system.object.mass = 2.0;
  system.object.inertia_body = cuboid_inertia(2.0, Vec3(0.1, 0.1, 0.1));
  system.object.grasp_offsets = {{Vec3(-0.05, 0, 0), Vec3::Zero()},
                                 {Vec3(0.05, 0, 0), Vec3::Zero()}};

  for (int i = 0; i < 2; ++i) {
    ContactModel contact;
    contact.kind = ContactKind::rigid;
    contact.attach_in_object = system.object.grasp_offsets[static_cast<size_t>(i)].position;
    system.contacts.push_back(contact);
  }
  return system;
}

ScenarioSystem make_planar_3r_duo(const ScenarioConfig& config) {
  ScenarioSystem system;
  system.default_path = "planar-arc";

  const std::vector<double> lengths{0.5, 0.4, 0.2};
  const std::vector<double> masses{4.0, 3.0, 1.5};
  for (int i = 0; i < 2; ++i) {
    const double side = i == 0 ? -0.8 : 0.8;
    JointLimits limits = symmetric_limits({60.0, 40.0, 15.0}, {3.0, 3.0, 3.0});
    apply_limit_overrides(limits, config, static_cast<size_t>(i));
    Pose base;
    base.position = Vec3(side, 0.0, 0.4);
    system.robots.push_back(std::make_shared<PlanarArm>(lengths, masses, base, limits));
  }

  system.object.mass = 4.0;
  system.object.inertia_body = cuboid_inertia(4.0, Vec3(0.6, 0.05, 0.05));
  system.object.grasp_offsets = {{Vec3(-0.3, 0, 0), Vec3::Zero()},
                                 {Vec3(0.3, 0, 0), Vec3::Zero()}};

  for (int i = 0; i < 2; ++i) {
    ContactModel contact;
    contact.kind = ContactKind::point_planar;
    contact.normal_axis = 0;  // x-normal planar convention
    contact.mu = 0.8;
    contact.delta1 = 0.3;
    contact.attach_in_object = system.object.grasp_offsets[static_cast<size_t>(i)].position;
    const Vec3 inward = i == 0 ? Vec3(1, 0, 0) : Vec3(-1, 0, 0);
    contact.frame_in_object = contact_frame_from_normal(inward, contact.normal_axis);
    system.contacts.push_back(contact);
  }
  return system;
}

ScenarioSystem make_stanford_duo(const ScenarioConfig& config) {
  ScenarioSystem system;
  system.default_path = "P.1";

  for (int i = 0; i < 2; ++i) {
    JointLimits limits = symmetric_limits({900.0, 900.0, 900.0, 90.0, 90.0, 30.0},
                                          {2.5, 2.5, 2.0, 6.0, 6.0, 6.0});
    apply_limit_overrides(limits, config, static_cast<size_t>(i));
    Pose base;
    base.position = Vec3(0.0, i == 0 ? -1.4 : 1.4, 0.0);
    base.rotation = i == 0 ? Mat3::Identity() : Mat3(rot_z(M_PI));
    system.robots.push_back(std::make_shared<StanfordArm>(StanfordParams{}, base, limits));
  }

  system.object.mass = 10.0;
  system.object.inertia_body = cuboid_inertia(10.0, Vec3(0.07, 0.4, 0.07));
  system.object.grasp_offsets = {{Vec3(0, -0.2, 0), Vec3::Zero()},
                                 {Vec3(0, 0.2, 0), Vec3::Zero()}};

  for (int i = 0; i < 2; ++i) {
    ContactModel contact;
    contact.kind = ContactKind::soft_finger;
    contact.normal_axis = 2;  // z-axes point along the inward surface normals
    contact.mu = 1.0;
    contact.gamma = 1.0;
    contact.delta1 = 0.5;
    contact.delta2 = 0.5;
    contact.attach_in_object = system.object.grasp_offsets[static_cast<size_t>(i)].position;
    const Vec3 inward = i == 0 ? Vec3(0, 1, 0) : Vec3(0, -1, 0);
    contact.frame_in_object = contact_frame_from_normal(inward, contact.normal_axis);
    system.contacts.push_back(contact);
  }
  return system;
}

// Candidate joint seeds for resolving the initial inverse-kinematics branch.
std::vector<VecX> hint_seeds(const Manipulator& robot) {
  std::vector<VecX> seeds;
  const int n = robot.dof();
  if (n == 1) {
    seeds.push_back(VecX::Zero(1));
    return seeds;
  }
  if (n == 3) {
    for (double q1 : {-2.0, -1.0, 0.0, 1.0, 2.0, 3.0}) {
      for (double q2 : {1.8, -1.8, 0.9, -0.9}) {
        VecX seed(3);
        seed << q1, q2, 0.0;
        seeds.push_back(seed);
      }
    }
    return seeds;
  }
  for (double q1 : {1.5, -1.5, 0.0, 3.0}) {
    for (double q2 : {1.2, 2.0, 0.6, -1.2}) {
      for (double q5 : {0.7, -0.7}) {
        VecX seed(6);
        seed << q1, q2, 1.2, 0.0, q5, 0.0;
        seeds.push_back(seed);
      }
    }
  }
  return seeds;
}

// Picks, per robot, the first seed whose branch follows the whole path on a
// coarse probe sweep.
std::vector<VecX> resolve_hints(const ScenarioSystem& system, const ObjectPath& path) {
  std::vector<VecX> hints;
  for (size_t i = 0; i < system.robots.size(); ++i) {
    const Manipulator& robot = *system.robots[i];
    bool found = false;
    for (const VecX& seed : hint_seeds(robot)) {
      try {
        VecX q = robot.inverse_kin(coupled_pose(path, system.object, static_cast<int>(i), 0.0),
                                   seed);
        const VecX q0 = q;
        for (int probe = 1; probe <= 16; ++probe) {
          q = robot.inverse_kin(
              coupled_pose(path, system.object, static_cast<int>(i), probe / 16.0), q);
        }
        hints.push_back(q0);
        found = true;
        break;
      } catch (const KinematicsError&) {
        continue;
      }
    }
    if (!found) {
      throw KinematicsError("robot " + std::to_string(i) +
                            ": no inverse-kinematics branch follows path '" + path.name() + "'");
    }
  }
  return hints;
}

int parse_axis(const YAML::Node& node) {
  if (!node) return 2;
  const std::string axis = node.as<std::string>();
  if (axis == "x" || axis == "0") return 0;
  if (axis == "y" || axis == "1") return 1;
  if (axis == "z" || axis == "2") return 2;
  throw ConfigError("invalid axis '" + axis + "'");
}

Vec3 parse_vec3(const YAML::Node& node) {
  if (!node || !node.IsSequence() || node.size() != 3) {
    throw ConfigError("expected a 3-vector");
  }
  return Vec3(node[0].as<double>(), node[1].as<double>(), node[2].as<double>());
}

ContactKind parse_contact_kind(const std::string& kind) {
  if (kind == "rigid") return ContactKind::rigid;
  if (kind == "point" || kind == "point-planar") return ContactKind::point_planar;
  if (kind == "point3d") return ContactKind::point3d;
  if (kind == "soft-finger") return ContactKind::soft_finger;
  throw ConfigError("unknown contact kind '" + kind + "'");
}

}  // namespace

std::vector<const Manipulator*> ScenarioSystem::robot_ptrs() const {
  std::vector<const Manipulator*> ptrs;
  ptrs.reserve(robots.size());
  for (const auto& r : robots) ptrs.push_back(r.get());
  return ptrs;
}

std::vector<std::string> builtin_scenario_names() {
  return {"pointmass-rail", "planar-3r-duo", "stanford-duo"};
}

ScenarioSystem make_system(const ScenarioConfig& config) {
  const std::string model = config.model.empty() ? config.scenario : config.model;
  ScenarioSystem system;
  if (model == "pointmass-rail") {
    system = make_pointmass_rail(config);
  } else if (model == "planar-3r-duo") {
    system = make_planar_3r_duo(config);
  } else if (model == "stanford-duo") {
    system = make_stanford_duo(config);
  } else {
    throw ConfigError("unknown model '" + model +
                      "' (builtin: pointmass-rail, planar-3r-duo, stanford-duo)");
  }
  if (config.contacts) system.contacts = *config.contacts;
  if (system.contacts.size() != system.robots.size()) {
    throw ConfigError("scenario needs one contact per robot");
  }
  for (const auto& c : system.contacts) c.validate();
  return system;
}

ScenarioConfig load_scenario_config(const std::string& filename) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(filename);
  } catch (const YAML::Exception& e) {
    throw ConfigError("cannot parse '" + filename + "': " + e.what());
  }
  ScenarioConfig config;
  if (root["scenario"]) config.scenario = root["scenario"].as<std::string>();
  if (root["model"]) config.model = root["model"].as<std::string>();
  if (root["path"]) config.path = root["path"].as<std::string>();
  if (root["grid"]) config.grid = root["grid"].as<int>();
  if (root["mode"]) config.mode = root["mode"].as<std::string>();
  if (root["boundary_velocity"]) {
    const auto& bv = root["boundary_velocity"];
    if (bv["start"]) config.sdot0 = bv["start"].as<double>();
    if (bv["end"]) config.sdotT = bv["end"].as<double>();
  }
  if (root["bounds"]) {
    const auto& bounds = root["bounds"];
    const auto parse_per_robot = [](const YAML::Node& node) {
      std::vector<VecX> result;
      for (const auto& row : node) {
        result.push_back(to_vec(row.as<std::vector<double>>()));
      }
      return result;
    };
    if (bounds["torque_upper"]) config.torque_upper = parse_per_robot(bounds["torque_upper"]);
    if (bounds["torque_lower"]) config.torque_lower = parse_per_robot(bounds["torque_lower"]);
    if (bounds["velocity"]) config.velocity = parse_per_robot(bounds["velocity"]);
  }
  if (root["contacts"]) {
    std::vector<ContactModel> contacts;
    for (const auto& node : root["contacts"]) {
      ContactModel contact;
      contact.kind = parse_contact_kind(node["kind"] ? node["kind"].as<std::string>() : "rigid");
      contact.normal_axis = parse_axis(node["normal_axis"]);
      if (node["tangent_axis"]) contact.tangent_axis = parse_axis(node["tangent_axis"]);
      if (node["mu"]) contact.mu = node["mu"].as<double>();
      if (node["gamma"]) contact.gamma = node["gamma"].as<double>();
      if (node["delta1"]) contact.delta1 = node["delta1"].as<double>();
      if (node["delta2"]) contact.delta2 = node["delta2"].as<double>();
      if (node["attach"]) contact.attach_in_object = parse_vec3(node["attach"]);
      if (node["normal"]) {
        contact.frame_in_object =
            contact_frame_from_normal(parse_vec3(node["normal"]), contact.normal_axis);
      }
      contacts.push_back(contact);
    }
    config.contacts = contacts;
  }
  if (root["ik_hints"]) {
    std::vector<VecX> hints;
    for (const auto& row : root["ik_hints"]) {
      hints.push_back(to_vec(row.as<std::vector<double>>()));
    }
    config.ik_hints = hints;
  }
  if (root["solver"]) {
    const auto& s = root["solver"];
    if (s["feastol"]) config.solver.feastol = s["feastol"].as<double>();
    if (s["abstol"]) config.solver.abstol = s["abstol"].as<double>();
    if (s["reltol"]) config.solver.reltol = s["reltol"].as<double>();
    if (s["max_iter"]) config.solver.max_iter = s["max_iter"].as<int>();
    if (s["backend"]) config.solver.backend = s["backend"].as<std::string>();
  }
  if (root["active_tol"]) config.active_tol = root["active_tol"].as<double>();
  if (root["output"]) config.output_dir = root["output"].as<std::string>();
  if (root["seed"]) config.seed = root["seed"].as<unsigned int>();
  return config;
}

std::string canonical_config_string(const ScenarioConfig& config) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "scenario=" << config.scenario << ";model=" << config.model << ";path=" << config.path
      << ";grid=" << config.grid << ";mode=" << config.mode << ";sdot0=" << config.sdot0
      << ";sdotT=" << config.sdotT << ";active_tol=" << config.active_tol;
  const auto dump_vecs = [&out](const char* name, const std::optional<std::vector<VecX>>& vecs) {
    out << ";" << name << "=";
    if (!vecs) {
      out << "default";
      return;
    }
    for (const VecX& v : *vecs) {
      out << "[";
      for (int i = 0; i < v.size(); ++i) out << v[i] << ",";
      out << "]";
    }
  };
  dump_vecs("tau_lo", config.torque_lower);
  dump_vecs("tau_hi", config.torque_upper);
  dump_vecs("vel", config.velocity);
  dump_vecs("hints", config.ik_hints);
  out << ";contacts=";
  if (!config.contacts) {
    out << "default";
  } else {
    for (const ContactModel& c : *config.contacts) {
      out << "{kind=" << static_cast<int>(c.kind) << ",axis=" << c.normal_axis << ",mu=" << c.mu
          << ",gamma=" << c.gamma << ",d1=" << c.delta1 << ",d2=" << c.delta2 << ",attach="
          << c.attach_in_object.transpose() << ",frame=" << c.frame_in_object.reshaped().transpose()
          << "}";
    }
  }
  out << ";solver={" << config.solver.feastol << "," << config.solver.abstol << ","
      << config.solver.reltol << "," << config.solver.max_iter << "," << config.solver.backend
      << "}";
  return out.str();
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string canon = canonical_config_string(config);
  std::uint64_t hash = 1469598103934665603ULL;
  for (const char c : canon) {
    hash ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    hash *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

std::shared_ptr<const ObjectPath> resolve_path(const ScenarioConfig& config,
                                               const ScenarioSystem& system) {
  std::string name = config.path.empty() ? system.default_path : config.path;
  if (name.rfind("csv:", 0) == 0) return load_csv_path(name.substr(4));
  return catalog_path(name);
}

struct PipelineArtifacts {
  ScenarioSystem system;
  std::shared_ptr<const ObjectPath> path;
  SampledJointPath sampled;
  PathDynamicsCoefficients coefs;
  BuiltProgram built;
};

BuiltProgram build_for_mode(const ScenarioConfig& config, const ScenarioSystem& system,
                            const PathDynamicsCoefficients& coefs) {
  const auto robots = system.robot_ptrs();
  if (config.mode == "rigid") {
    return build_rigid_program(coefs, robots, config.sdot0, config.sdotT);
  }
  if (config.mode == "frictional") {
    for (const auto& c : system.contacts) {
      if (c.kind == ContactKind::rigid) {
        throw ConfigError("frictional mode requires non-rigid contacts");
      }
    }
    return build_frictional_program(coefs, robots, system.contacts, config.sdot0, config.sdotT);
  }
  if (config.mode.rfind("fixed", 0) == 0) {
    const std::string rule_name = config.mode == "fixed" ? "pinv" : config.mode.substr(6);
    const DistributionRule rule =
        parse_distribution(rule_name, static_cast<int>(system.robots.size()));
    return build_fixed_distribution_program(coefs, robots, rule, config.sdot0, config.sdotT);
  }
  throw ConfigError("unknown mode '" + config.mode +
                    "' (rigid, frictional, fixed:pinv, fixed:single:<i>)");
}

PipelineArtifacts run_until_built(const ScenarioConfig& config) {
  if (config.grid < 10) throw ConfigError("grid must be at least 10 (got " +
                                          std::to_string(config.grid) + ")");
  PipelineArtifacts artifacts;
  artifacts.system = make_system(config);
  artifacts.path = resolve_path(config, artifacts.system);

  const PathGrid grid(config.grid);
  const auto robots = artifacts.system.robot_ptrs();
  const std::vector<VecX> hints = config.ik_hints
                                      ? *config.ik_hints
                                      : resolve_hints(artifacts.system, *artifacts.path);
  artifacts.sampled = sweep_inverse_kinematics(robots, *artifacts.path, artifacts.system.object,
                                               grid, hints);
  artifacts.coefs = assemble_coefficients(robots, artifacts.system.object, *artifacts.path, grid,
                                          artifacts.sampled);
  artifacts.built = build_for_mode(config, artifacts.system, artifacts.coefs);
  check_static_feasibility(artifacts.coefs, robots, artifacts.built, config.solver);
  return artifacts;
}

}  // namespace

RunResult run_pipeline(const ScenarioConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  PipelineArtifacts artifacts = run_until_built(config);
  const double assembly_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const SolveReport report = solve(artifacts.built.program, config.solver);
  const auto robots = artifacts.system.robot_ptrs();

  RunResult result;
  result.path_name = artifacts.path->name();
  result.assembly_time_s = assembly_s;
  result.solve_time_s = report.wall_time_s;
  result.solution = recover_trajectory(artifacts.built, report, artifacts.coefs,
                                       artifacts.sampled);
  result.audit = constraint_audit(result.solution, artifacts.built, robots,
                                  artifacts.system.object, *artifacts.path, artifacts.sampled);
  result.active = active_constraint_report(result.solution, robots, artifacts.coefs,
                                           config.active_tol);
  return result;
}

namespace {
std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}
}  // namespace

RunManifest run_scenario(const ScenarioConfig& config) {
  const RunResult result = run_pipeline(config);

  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  const std::string stem = config.scenario + "_" + result.path_name + "_" + config.mode + "_K" +
                           std::to_string(config.grid);
  const std::string solution_csv = (fs::path(config.output_dir) / (stem + "_solution.csv")).string();
  const std::string audit_csv = (fs::path(config.output_dir) / (stem + "_audit.csv")).string();
  const std::string plot_file = (fs::path(config.output_dir) / (stem + ".gp")).string();
  const std::string manifest_file = (fs::path(config.output_dir) / (stem + "_manifest.yaml")).string();

  write_solution_csv(solution_csv, result.solution, &result.active);
  write_audit_csv(audit_csv, result.audit);
  write_gnuplot_script(plot_file, stem + "_solution.csv", result.solution);

  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.config_hash = config_hash(config);
  manifest.timestamp = iso_timestamp();
  manifest.scenario = config.scenario;
  manifest.path = result.path_name;
  manifest.mode = config.mode;
  manifest.grid = config.grid;
  manifest.total_time = result.solution.total_time;
  manifest.solver_status = status_name(result.solution.status);
  manifest.audit_pass = result.audit.all_pass;
  manifest.outputs = {solution_csv, audit_csv, plot_file};
  write_manifest(manifest_file, manifest);

  if (!result.audit.all_pass) {
    throw AuditError("constraint audit failed:\n" + format_audit_summary(result.audit));
  }
  return manifest;
}

void write_manifest(const std::string& filename, const RunManifest& manifest) {
  std::ofstream out(filename);
  if (!out) throw Error(Stage::io, "cannot open '" + filename + "' for writing");
  out << std::setprecision(17);
  out << "tool_version: " << manifest.tool_version << "\n";
  out << "config_hash: " << manifest.config_hash << "\n";
  out << "timestamp: " << manifest.timestamp << "\n";
  out << "scenario: " << manifest.scenario << "\n";
  out << "path: " << manifest.path << "\n";
  out << "mode: " << manifest.mode << "\n";
  out << "grid: " << manifest.grid << "\n";
  out << "T: " << manifest.total_time << "\n";
  out << "solver_status: " << manifest.solver_status << "\n";
  out << "audit_pass: " << (manifest.audit_pass ? "true" : "false") << "\n";
  out << "outputs:\n";
  for (const auto& o : manifest.outputs) out << "  - " << o << "\n";
}

CompareTable compare_scenarios(const ScenarioConfig& config,
                               const std::vector<std::string>& paths,
                               const std::vector<std::string>& modes) {
  CompareTable table;
  table.paths = paths;
  table.modes = modes;
  table.cells.resize(paths.size());

  std::vector<std::future<CompareCell>> futures;
  for (const std::string& path : paths) {
    for (const std::string& mode : modes) {
      ScenarioConfig cell_config = config;
      cell_config.path = path;
      cell_config.mode = mode;
      futures.push_back(std::async(std::launch::async, [cell_config] {
        CompareCell cell;
        try {
          const RunResult result = run_pipeline(cell_config);
          cell.feasible = true;
          cell.total_time = result.solution.total_time;
        } catch (const Error& e) {
          cell.feasible = false;
          cell.note = std::string(stage_name(e.stage())) + ": " + e.what();
        }
        return cell;
      }));
    }
  }
  size_t index = 0;
  for (size_t p = 0; p < paths.size(); ++p) {
    table.cells[p].resize(modes.size());
    for (size_t m = 0; m < modes.size(); ++m) table.cells[p][m] = futures[index++].get();
  }

  // Annotate the expected ordering: the rigid column is minimal.
  const auto rigid_it = std::find(modes.begin(), modes.end(), "rigid");
  if (rigid_it != modes.end()) {
    const size_t rigid_col = static_cast<size_t>(rigid_it - modes.begin());
    for (size_t p = 0; p < paths.size(); ++p) {
      if (!table.cells[p][rigid_col].feasible) continue;
      for (size_t m = 0; m < modes.size(); ++m) {
        if (m == rigid_col || !table.cells[p][m].feasible) continue;
        if (table.cells[p][rigid_col].total_time >
            table.cells[p][m].total_time * (1.0 + 1e-6)) {
          table.rigid_minimal = false;
        }
      }
    }
  }
  return table;
}

void write_compare_csv(const std::string& filename, const CompareTable& table) {
  std::ofstream out(filename);
  if (!out) throw Error(Stage::io, "cannot open '" + filename + "' for writing");
  out << "path";
  for (const auto& mode : table.modes) out << "," << mode;
  out << "\n" << std::setprecision(12);
  for (size_t p = 0; p < table.paths.size(); ++p) {
    out << table.paths[p];
    for (const auto& cell : table.cells[p]) {
      if (cell.feasible) {
        out << "," << cell.total_time;
      } else {
        out << ",infeasible";
      }
    }
    out << "\n";
  }
}

std::string format_compare_table(const CompareTable& table) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "path";
  for (const auto& mode : table.modes) out << std::setw(14) << mode;
  out << "\n";
  for (size_t p = 0; p < table.paths.size(); ++p) {
    out << std::setw(8) << table.paths[p];
    for (const auto& cell : table.cells[p]) {
      if (cell.feasible) {
        out << std::setw(14) << (std::to_string(cell.total_time) + " s");
      } else {
        out << std::setw(14) << "infeasible";
      }
    }
    out << "\n";
  }
  out << "ordering rigid <= others: " << (table.rigid_minimal ? "holds" : "VIOLATED") << "\n";
  return out.str();
}

BenchTable bench_scenario(const ScenarioConfig& config, const std::vector<int>& grids) {
  BenchTable table;
  for (const int grid : grids) {
    ScenarioConfig run_config = config;
    run_config.grid = grid;
    const RunResult result = run_pipeline(run_config);
    BenchRow row;
    row.grid = grid;
    row.assembly_time_s = result.assembly_time_s;
    row.solve_time_s = result.solve_time_s;
    row.total_time = result.solution.total_time;
    table.rows.push_back(row);
  }
  // Log-log fit of assembly time against K.
  if (table.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(table.rows.size());
    for (const BenchRow& row : table.rows) {
      const double x = std::log(static_cast<double>(row.grid));
      const double y = std::log(std::max(row.assembly_time_s, 1e-9));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    table.assembly_loglog_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return table;
}

void write_bench_csv(const std::string& filename, const BenchTable& table) {
  std::ofstream out(filename);
  if (!out) throw Error(Stage::io, "cannot open '" + filename + "' for writing");
  out << "K,assembly_s,solve_s,T\n" << std::setprecision(12);
  for (const BenchRow& row : table.rows) {
    out << row.grid << "," << row.assembly_time_s << "," << row.solve_time_s << ","
        << row.total_time << "\n";
  }
}

std::string format_bench_table(const BenchTable& table) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "K" << std::setw(16) << "assembly [s]" << std::setw(16)
      << "solve [s]" << std::setw(14) << "T [s]" << "\n";
  for (const BenchRow& row : table.rows) {
    out << std::setw(8) << row.grid << std::setw(16) << row.assembly_time_s << std::setw(16)
        << row.solve_time_s << std::setw(14) << row.total_time << "\n";
  }
  out << "assembly time ~ K^" << std::setprecision(2) << table.assembly_loglog_slope << "\n";
  return out.str();
}

void write_gnuplot_script(const std::string& filename, const std::string& csv_file,
                          const TrajectorySolution& solution) {
  std::ofstream out(filename);
  if (!out) throw Error(Stage::io, "cannot open '" + filename + "' for writing");
  out << "set datafile separator ','\n";
  out << "set key outside\n";
  out << "set xlabel 's'\n";

  int col = 5;  // columns 1..4: s, b, a, t
  out << "set terminal pngcairo size 1100,500\n";
  out << "set output 'torques.png'\n";
  out << "set ylabel 'joint torque / force'\n";
  out << "plot ";
  for (size_t i = 0; i < solution.tau.size(); ++i) {
    for (int j = 0; j < solution.tau[i].rows(); ++j, ++col) {
      if (col > 5) out << ", ";
      out << "'" << csv_file << "' using 1:" << col << " with lines title 'tau " << i << "." << j
          << "'";
    }
  }
  out << "\n";
  out << "set output 'velocities.png'\n";
  out << "set ylabel 'joint velocity'\n";
  out << "plot ";
  const int qdot_start = col;
  for (size_t i = 0; i < solution.qdot.size(); ++i) {
    for (int j = 0; j < solution.qdot[i].rows(); ++j, ++col) {
      if (col > qdot_start) out << ", ";
      out << "'" << csv_file << "' using 1:" << col << " with lines title 'qdot " << i << "."
          << j << "'";
    }
  }
  out << "\n";
}

}  // namespace cotopt
