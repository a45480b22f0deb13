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

#ifndef COTOPT_TRANSCRIPTION_HPP_
#define COTOPT_TRANSCRIPTION_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cotopt/conic_solver.hpp"
#include "cotopt/grasp.hpp"
#include "cotopt/path_kinematics.hpp"

namespace cotopt {

/// Path-space dynamics coefficients evaluated at the grid nodes:
/// tau_i = m_i a + c_i b + g_i + J_i' h_i (per robot) and
/// h_O = m_O a + c_O b + g_O (object).
struct PathDynamicsCoefficients {
  PathGrid grid{2};

  struct RobotCoefs {
    MatX m, c, g;            // n_i x (K+1)
    std::vector<Mat6X> J;    // per node, 6 x n_i
  };
  std::vector<RobotCoefs> robots;

  MatX m_O, c_O;             // 6 x (K+1)
  Vec6 g_O;

  std::vector<Pose> object_poses;           // per node
  std::vector<std::vector<Mat6>> g_blocks;  // [node][robot], from the grasp offsets
  VecX b_bar;                               // velocity-bound translation, +inf allowed

  int num_robots() const { return static_cast<int>(robots.size()); }
};

PathDynamicsCoefficients assemble_coefficients(const std::vector<const Manipulator*>& robots,
                                               const RigidObjectModel& object,
                                               const ObjectPath& path, const PathGrid& grid,
                                               const SampledJointPath& sampled);

enum class ProgramKind { rigid, frictional, fixed_distribution };
const char* program_kind_name(ProgramKind k);

/// Linear wrench distribution h_i = W_i(s) h_O for the baseline program.
struct DistributionRule {
  std::string name;
  // Per-node weights from the grasp blocks; sum_i G_i W_i must be identity.
  std::function<std::vector<Mat6>(const std::vector<Mat6>&)> weights;
};
DistributionRule pinv_distribution();
DistributionRule single_robot_distribution(int robot);
/// "pinv" or "single:<i>".
DistributionRule parse_distribution(const std::string& spec, int num_robots);

/// Finite-dimensional SOCP over the grid together with its variable layout.
/// Layout: per node k the block [b, c, d, h_O(6), tau_1..tau_N, wrench vars],
/// then all interval accelerations a_0..a_{K-1}. Node-level equalities use
/// the acceleration of the interval starting at the node (a_{K-1} at node K).
class BuiltProgram {
 public:
  ConicProgram program;
  ProgramKind kind = ProgramKind::rigid;
  int K = 0;
  std::vector<int> dof;          // per robot
  std::vector<int> wrench_dims;  // per contact (frictional only)
  std::vector<ContactModel> contacts;             // frictional only
  std::vector<std::vector<Mat6>> distribution;    // [node][robot] (fixed only)
  double sdot0 = 0.0, sdotT = 0.0;

  int node_stride() const;
  int var_b(int k) const { return k * node_stride(); }
  int var_c(int k) const { return k * node_stride() + 1; }
  int var_d(int k) const { return k * node_stride() + 2; }
  int var_h_object(int k, int row) const { return k * node_stride() + 3 + row; }
  int var_tau(int robot, int k, int joint) const;
  int var_h_contact(int robot, int k, int row) const;   // rigid
  int var_f_motion(int contact, int k, int row) const;  // frictional
  int var_f_internal(int contact, int k, int row) const;
  int var_a(int k) const;
  /// Acceleration variable used by node-level equalities at node k.
  int var_a_node(int k) const { return var_a(std::min(k, K - 1)); }
};

BuiltProgram build_rigid_program(const PathDynamicsCoefficients& coefs,
                                 const std::vector<const Manipulator*>& robots, double sdot0,
                                 double sdotT);

BuiltProgram build_frictional_program(const PathDynamicsCoefficients& coefs,
                                      const std::vector<const Manipulator*>& robots,
                                      const std::vector<ContactModel>& contacts, double sdot0,
                                      double sdotT);

BuiltProgram build_fixed_distribution_program(const PathDynamicsCoefficients& coefs,
                                              const std::vector<const Manipulator*>& robots,
                                              const DistributionRule& rule, double sdot0,
                                              double sdotT);

/// Static (a = b = 0) feasibility screen, run node by node before the main
/// solve. Throws InfeasibleError naming the first violated node.
void check_static_feasibility(const PathDynamicsCoefficients& coefs,
                              const std::vector<const Manipulator*>& robots,
                              const BuiltProgram& built, const SolverSettings& settings);

struct TrajectorySolution {
  ProgramKind kind = ProgramKind::rigid;
  SolveStatus status = SolveStatus::numerical_failure;
  double objective = 0.0;
  double total_time = 0.0;  // T
  VecX s;                   // K+1 nodes
  VecX b;                   // K+1
  VecX a;                   // K
  VecX t;                   // K+1 cumulative time map
  MatX h_object;            // 6 x (K+1)
  std::vector<MatX> tau;       // per robot, n_i x (K+1)
  std::vector<MatX> qdot;      // per robot
  std::vector<MatX> qddot;     // per robot
  std::vector<MatX> h_contact;   // per robot/contact, 6 x (K+1) world wrench
  std::vector<MatX> f_motion;    // per contact, m_i x (K+1) (frictional)
  std::vector<MatX> f_internal;  // per contact (frictional)
  std::vector<MatX> h_internal;  // per contact, 6 x (K+1) (frictional)
  double solve_wall_time_s = 0.0;
  int solver_iterations = 0;
};

TrajectorySolution recover_trajectory(const BuiltProgram& built, const SolveReport& report,
                                      const PathDynamicsCoefficients& coefs,
                                      const SampledJointPath& sampled);

struct ActiveConstraintReport {
  std::vector<Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>> torque_at_bound;  // per robot
  std::vector<bool> velocity_at_bound;  // b_k against b_bar
  std::vector<bool> any_active;         // per node
  double fraction_active = 0.0;           // all nodes
  double interior_fraction_active = 0.0;  // nodes 1..K-1
};

ActiveConstraintReport active_constraint_report(const TrajectorySolution& solution,
                                                const std::vector<const Manipulator*>& robots,
                                                const PathDynamicsCoefficients& coefs,
                                                double tol = 1e-3);

void write_solution_csv(const std::string& filename, const TrajectorySolution& solution,
                        const ActiveConstraintReport* active = nullptr);

}  // namespace cotopt

#endif  // COTOPT_TRANSCRIPTION_HPP_
