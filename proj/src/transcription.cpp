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

#include "cotopt/transcription.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>

namespace cotopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* program_kind_name(ProgramKind k) {
  switch (k) {
    case ProgramKind::rigid: return "rigid";
    case ProgramKind::frictional: return "frictional";
    case ProgramKind::fixed_distribution: return "fixed";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Coefficients

PathDynamicsCoefficients assemble_coefficients(const std::vector<const Manipulator*>& robots,
                                               const RigidObjectModel& object,
                                               const ObjectPath& path, const PathGrid& grid,
                                               const SampledJointPath& sampled) {
  if (sampled.q.size() != robots.size()) {
    throw Error(Stage::coefficients, "sampled joint path does not match robot count");
  }
  object.validate();

  PathDynamicsCoefficients coefs;
  coefs.grid = grid;
  const int nodes = grid.nodes();
  const double fd_step = grid.delta() / 10.0;

  coefs.g_O = Vec6::Zero();
  coefs.g_O.head<3>() = -object.mass * object.gravity;
  coefs.m_O.resize(6, nodes);
  coefs.c_O.resize(6, nodes);
  coefs.b_bar = VecX::Constant(nodes, kInf);
  coefs.object_poses.resize(static_cast<size_t>(nodes));
  coefs.g_blocks.resize(static_cast<size_t>(nodes));

  coefs.robots.resize(robots.size());
  for (size_t i = 0; i < robots.size(); ++i) {
    const int n = robots[i]->dof();
    coefs.robots[i].m.resize(n, nodes);
    coefs.robots[i].c.resize(n, nodes);
    coefs.robots[i].g.resize(n, nodes);
    coefs.robots[i].J.resize(static_cast<size_t>(nodes));
  }

  const auto euler_angular_map = [&path](double s) {
    return euler_rate_transform(path.sample(s).phi);
  };

  for (int k = 0; k < nodes; ++k) {
    const double s = grid.node(k);
    const PathSample ps = path.sample(s);
    const Pose pose{ps.p, rotation_zyz(ps.phi)};
    coefs.object_poses[static_cast<size_t>(k)] = pose;

    const Mat3 t_angular = euler_rate_transform(ps.phi);
    Mat3 dt_angular;
    if (k == 0) {
      dt_angular = (-3.0 * euler_angular_map(s) + 4.0 * euler_angular_map(s + fd_step) -
                    euler_angular_map(s + 2.0 * fd_step)) /
                   (2.0 * fd_step);
    } else if (k == nodes - 1) {
      dt_angular = (3.0 * euler_angular_map(s) - 4.0 * euler_angular_map(s - fd_step) +
                    euler_angular_map(s - 2.0 * fd_step)) /
                   (2.0 * fd_step);
    } else {
      dt_angular =
          (euler_angular_map(s + fd_step) - euler_angular_map(s - fd_step)) / (2.0 * fd_step);
    }

    const Vec3 omega_rate = t_angular * ps.dphi;  // angular velocity per unit sdot
    const ObjectDynamicsTerms terms = eval_object_dynamics_terms(object, pose, omega_rate);

    Vec6 xo1, xo2;
    xo1 << ps.dp, ps.dphi;
    xo2 << ps.ddp, ps.ddphi;
    Mat6 t_pose = Mat6::Identity();
    t_pose.bottomRightCorner<3, 3>() = t_angular;
    Mat6 dt_pose = Mat6::Zero();
    dt_pose.bottomRightCorner<3, 3>() = dt_angular;

    coefs.m_O.col(k) = terms.M * (t_pose * xo1);
    coefs.c_O.col(k) = terms.M * (dt_pose * xo1 + t_pose * xo2) + terms.C * (t_pose * xo1);

    auto& node_blocks = coefs.g_blocks[static_cast<size_t>(k)];
    node_blocks.reserve(robots.size());
    for (size_t i = 0; i < robots.size(); ++i) {
      node_blocks.push_back(
          grasp_matrix_block(coupled_offset_world(path, object, static_cast<int>(i), s)));
    }

    for (size_t i = 0; i < robots.size(); ++i) {
      const Manipulator& robot = *robots[i];
      const VecX q = sampled.q[i].col(k);
      const VecX dq = sampled.dq[i].col(k);
      const VecX ddq = sampled.ddq[i].col(k);
      const MatX mass = robot.mass_matrix(q);
      coefs.robots[i].m.col(k) = mass * dq;
      coefs.robots[i].c.col(k) = mass * ddq + robot.coriolis(q, dq) * dq;
      coefs.robots[i].g.col(k) = robot.gravity_vec(q);
      coefs.robots[i].J[static_cast<size_t>(k)] = robot.jacobian(q);

      const VecX& vel = robot.limits().velocity;
      for (int j = 0; j < robot.dof(); ++j) {
        if (std::abs(dq[j]) > 1e-12) {
          const double cap = vel[j] / std::abs(dq[j]);
          coefs.b_bar[k] = std::min(coefs.b_bar[k], cap * cap);
        }
      }
    }

    if (!coefs.m_O.col(k).allFinite() || !coefs.c_O.col(k).allFinite()) {
      throw Error(Stage::coefficients,
                  "non-finite object coefficients at s = " + std::to_string(s));
    }
  }
  return coefs;
}

// ---------------------------------------------------------------------------
// Distributions

DistributionRule pinv_distribution() {
  DistributionRule rule;
  rule.name = "pinv";
  rule.weights = [](const std::vector<Mat6>& g_blocks) {
    Mat6 gram = Mat6::Zero();
    for (const Mat6& g : g_blocks) gram += g * g.transpose();
    const Mat6 gram_inv = gram.inverse();
    std::vector<Mat6> weights;
    weights.reserve(g_blocks.size());
    for (const Mat6& g : g_blocks) weights.push_back(g.transpose() * gram_inv);
    return weights;
  };
  return rule;
}

DistributionRule single_robot_distribution(int robot) {
  DistributionRule rule;
  rule.name = "single:" + std::to_string(robot);
  rule.weights = [robot](const std::vector<Mat6>& g_blocks) {
    std::vector<Mat6> weights(g_blocks.size(), Mat6::Zero());
    weights[static_cast<size_t>(robot)] = g_blocks[static_cast<size_t>(robot)].inverse();
    return weights;
  };
  return rule;
}

DistributionRule parse_distribution(const std::string& spec, int num_robots) {
  if (spec == "pinv") return pinv_distribution();
  if (spec.rfind("single:", 0) == 0) {
    const int robot = std::stoi(spec.substr(7));
    if (robot < 0 || robot >= num_robots) {
      throw ConfigError("distribution '" + spec + "': robot index out of range");
    }
    return single_robot_distribution(robot);
  }
  throw ConfigError("unknown wrench distribution '" + spec + "' (use pinv or single:<i>)");
}

// ---------------------------------------------------------------------------
// Program layout

int BuiltProgram::node_stride() const {
  int stride = 3 + 6 + std::accumulate(dof.begin(), dof.end(), 0);
  if (kind == ProgramKind::rigid) stride += 6 * static_cast<int>(dof.size());
  if (kind == ProgramKind::frictional) {
    stride += 2 * std::accumulate(wrench_dims.begin(), wrench_dims.end(), 0);
  }
  return stride;
}

int BuiltProgram::var_tau(int robot, int k, int joint) const {
  int offset = 3 + 6;
  for (int i = 0; i < robot; ++i) offset += dof[static_cast<size_t>(i)];
  return k * node_stride() + offset + joint;
}

int BuiltProgram::var_h_contact(int robot, int k, int row) const {
  int offset = 3 + 6 + std::accumulate(dof.begin(), dof.end(), 0);
  return k * node_stride() + offset + 6 * robot + row;
}

int BuiltProgram::var_f_motion(int contact, int k, int row) const {
  int offset = 3 + 6 + std::accumulate(dof.begin(), dof.end(), 0);
  for (int i = 0; i < contact; ++i) offset += 2 * wrench_dims[static_cast<size_t>(i)];
  return k * node_stride() + offset + row;
}

int BuiltProgram::var_f_internal(int contact, int k, int row) const {
  return var_f_motion(contact, k, row) + wrench_dims[static_cast<size_t>(contact)];
}

int BuiltProgram::var_a(int k) const { return (K + 1) * node_stride() + k; }

namespace {

// Declares all variables of the node-major layout and the shared constraint
// skeleton (epigraph cones, b-progression, boundary rows, objective).
void build_skeleton(BuiltProgram& built, const PathDynamicsCoefficients& coefs,
                    const std::vector<const Manipulator*>& robots, double sdot0, double sdotT) {
  const int K = built.K;
  ConicProgram& p = built.program;

  if (sdot0 < 0.0 || sdotT < 0.0) {
    throw Error(Stage::build, "boundary path velocities must be nonnegative");
  }
  if (sdot0 * sdot0 > coefs.b_bar[0] + 1e-12) {
    throw InfeasibleError("boundary velocity infeasible: sdot_0^2 = " +
                          std::to_string(sdot0 * sdot0) + " exceeds b_bar(0) = " +
                          std::to_string(coefs.b_bar[0]));
  }
  if (sdotT * sdotT > coefs.b_bar[K] + 1e-12) {
    throw InfeasibleError("boundary velocity infeasible: sdot_T^2 exceeds b_bar(1)");
  }

  for (int k = 0; k <= K; ++k) {
    const std::string ks = std::to_string(k);
    // Boundary nodes are pinned by equality rows; interior nodes carry the
    // box 0 <= b <= b_bar.
    if (k == 0 || k == K) {
      p.add_free_var("b[" + ks + "]");
    } else {
      p.add_var("b[" + ks + "]", 0.0, coefs.b_bar[k]);
    }
    p.add_free_var("c[" + ks + "]");
    if (k < K) {
      p.add_free_var("d[" + ks + "]");
    } else {
      // d[K] exists in the layout but is not referenced by the objective or
      // any cone; a unit box keeps it regular.
      p.add_var("d[" + ks + "]", 0.0, 1.0);
    }
    for (int r = 0; r < 6; ++r) p.add_free_var("hO[" + ks + "][" + std::to_string(r) + "]");
    for (size_t i = 0; i < robots.size(); ++i) {
      const JointLimits& limits = robots[i]->limits();
      for (int j = 0; j < robots[i]->dof(); ++j) {
        p.add_var("tau[" + std::to_string(i) + "][" + ks + "][" + std::to_string(j) + "]",
                  limits.torque_lower[j], limits.torque_upper[j]);
      }
    }
    switch (built.kind) {
      case ProgramKind::rigid:
        for (size_t i = 0; i < robots.size(); ++i) {
          for (int r = 0; r < 6; ++r) {
            p.add_free_var("h[" + std::to_string(i) + "][" + ks + "][" + std::to_string(r) + "]");
          }
        }
        break;
      case ProgramKind::frictional:
        for (size_t ci = 0; ci < built.wrench_dims.size(); ++ci) {
          for (int r = 0; r < built.wrench_dims[ci]; ++r) {
            p.add_free_var("fM[" + std::to_string(ci) + "][" + ks + "][" + std::to_string(r) +
                           "]");
          }
          for (int r = 0; r < built.wrench_dims[ci]; ++r) {
            p.add_free_var("fI[" + std::to_string(ci) + "][" + ks + "][" + std::to_string(r) +
                           "]");
          }
        }
        break;
      case ProgramKind::fixed_distribution:
        break;
    }
  }
  for (int k = 0; k < K; ++k) p.add_free_var("a[" + std::to_string(k) + "]");

  const double delta_s = coefs.grid.delta();
  for (int k = 0; k < K; ++k) p.objective[built.var_d(k)] = 2.0 * delta_s;

  // Epigraph cones: c_k^2 <= b_k and d_k >= 1 / (c_k + c_{k+1}).
  for (int k = 0; k <= K; ++k) {
    ConicProgram::AffineSoc sqrt_cone;
    sqrt_cone.dim = 3;
    sqrt_cone.label = "sqrt[" + std::to_string(k) + "]";
    sqrt_cone.offset = VecX::Zero(3);
    sqrt_cone.rows.push_back({0, built.var_b(k), 1.0});
    sqrt_cone.offset[0] = 1.0;
    sqrt_cone.rows.push_back({1, built.var_c(k), 2.0});
    sqrt_cone.rows.push_back({2, built.var_b(k), 1.0});
    sqrt_cone.offset[2] = -1.0;
    p.affine_socs.push_back(std::move(sqrt_cone));
  }
  for (int k = 0; k < K; ++k) {
    ConicProgram::AffineSoc recip_cone;
    recip_cone.dim = 3;
    recip_cone.label = "recip[" + std::to_string(k) + "]";
    recip_cone.offset = VecX::Zero(3);
    recip_cone.rows.push_back({0, built.var_c(k), 1.0});
    recip_cone.rows.push_back({0, built.var_c(k + 1), 1.0});
    recip_cone.rows.push_back({0, built.var_d(k), 1.0});
    recip_cone.offset[1] = 2.0;
    recip_cone.rows.push_back({2, built.var_c(k), 1.0});
    recip_cone.rows.push_back({2, built.var_c(k + 1), 1.0});
    recip_cone.rows.push_back({2, built.var_d(k), -1.0});
    p.affine_socs.push_back(std::move(recip_cone));
  }
}

// b-progression and boundary rows, appended after the node-level equalities.
void add_progression_rows(BuiltProgram& built, const PathDynamicsCoefficients& coefs,
                          double sdot0, double sdotT, int& row) {
  ConicProgram& p = built.program;
  const double delta_s = coefs.grid.delta();
  for (int k = 0; k < built.K; ++k) {
    p.add_eq(row, built.var_b(k + 1), 1.0);
    p.add_eq(row, built.var_b(k), -1.0);
    p.add_eq(row, built.var_a(k), -2.0 * delta_s);
    p.eq_rhs[row] = 0.0;
    ++row;
  }
  p.add_eq(row, built.var_b(0), 1.0);
  p.eq_rhs[row] = sdot0 * sdot0;
  ++row;
  p.add_eq(row, built.var_b(built.K), 1.0);
  p.eq_rhs[row] = sdotT * sdotT;
  ++row;
}

void add_torque_core(BuiltProgram& built, const PathDynamicsCoefficients& coefs, int robot, int k,
                     int row_base) {
  // tau - m a - c b - <wrench terms> = g; the wrench terms are added by the
  // mode-specific builder.
  ConicProgram& p = built.program;
  const auto& rc = coefs.robots[static_cast<size_t>(robot)];
  const int n = static_cast<int>(rc.m.rows());
  for (int j = 0; j < n; ++j) {
    const int row = row_base + j;
    p.add_eq(row, built.var_tau(robot, k, j), 1.0);
    p.add_eq(row, built.var_a_node(k), -rc.m(j, k));
    p.add_eq(row, built.var_b(k), -rc.c(j, k));
    p.eq_rhs[row] = rc.g(j, k);
  }
}

void add_object_rows(BuiltProgram& built, const PathDynamicsCoefficients& coefs, int k,
                     int row_base) {
  ConicProgram& p = built.program;
  for (int r = 0; r < 6; ++r) {
    const int row = row_base + r;
    p.add_eq(row, built.var_h_object(k, r), 1.0);
    p.add_eq(row, built.var_a_node(k), -coefs.m_O(r, k));
    p.add_eq(row, built.var_b(k), -coefs.c_O(r, k));
    p.eq_rhs[row] = coefs.g_O[r];
  }
}

}  // namespace

BuiltProgram build_rigid_program(const PathDynamicsCoefficients& coefs,
                                 const std::vector<const Manipulator*>& robots, double sdot0,
                                 double sdotT) {
  BuiltProgram built;
  built.kind = ProgramKind::rigid;
  built.K = coefs.grid.intervals();
  for (const auto* r : robots) built.dof.push_back(r->dof());
  built.sdot0 = sdot0;
  built.sdotT = sdotT;

  for (int k = 0; k <= built.K; ++k) {
    for (size_t i = 0; i < robots.size(); ++i) {
      if (min_singular_value(coefs.g_blocks[static_cast<size_t>(k)][i]) < 1e-9) {
        throw Error(Stage::build, "grasp matrix block rank-deficient at node " +
                                      std::to_string(k));
      }
    }
  }

  build_skeleton(built, coefs, robots, sdot0, sdotT);
  ConicProgram& p = built.program;

  const int n_total = std::accumulate(built.dof.begin(), built.dof.end(), 0);
  int row = 0;
  for (int k = 0; k <= built.K; ++k) {
    int tau_row = row;
    for (size_t i = 0; i < robots.size(); ++i) {
      add_torque_core(built, coefs, static_cast<int>(i), k, tau_row);
      const Mat6X& jac = coefs.robots[i].J[static_cast<size_t>(k)];
      for (int j = 0; j < robots[i]->dof(); ++j) {
        for (int r = 0; r < 6; ++r) {
          p.add_eq(tau_row + j, built.var_h_contact(static_cast<int>(i), k, r), -jac(r, j));
        }
      }
      tau_row += robots[i]->dof();
    }
    row += n_total;

    add_object_rows(built, coefs, k, row);
    row += 6;

    // h_O = sum_i G_i h_i
    for (int r = 0; r < 6; ++r) {
      const int wrench_row = row + r;
      p.add_eq(wrench_row, built.var_h_object(k, r), 1.0);
      for (size_t i = 0; i < robots.size(); ++i) {
        const Mat6& g = coefs.g_blocks[static_cast<size_t>(k)][i];
        for (int c = 0; c < 6; ++c) {
          if (g(r, c) != 0.0) {
            p.add_eq(wrench_row, built.var_h_contact(static_cast<int>(i), k, c), -g(r, c));
          }
        }
      }
      p.eq_rhs[wrench_row] = 0.0;
    }
    row += 6;
  }
  add_progression_rows(built, coefs, sdot0, sdotT, row);
  return built;
}

BuiltProgram build_frictional_program(const PathDynamicsCoefficients& coefs,
                                      const std::vector<const Manipulator*>& robots,
                                      const std::vector<ContactModel>& contacts, double sdot0,
                                      double sdotT) {
  if (contacts.size() != robots.size()) {
    throw Error(Stage::build, "frictional program needs one contact per robot");
  }
  for (const auto& c : contacts) {
    c.validate();
    if (c.kind == ContactKind::rigid) {
      throw ConfigError("frictional mode requires non-rigid contacts");
    }
  }
  if (contacts.size() == 2) {
    const Vec3 n1 = contacts[0].frame_in_object.col(contacts[0].normal_axis);
    const Vec3 n2 = contacts[1].frame_in_object.col(contacts[1].normal_axis);
    if (!force_closure_two_contacts(contacts[0].attach_in_object, n1, contacts[0].mu,
                                    contacts[1].attach_in_object, n2, contacts[1].mu)) {
      throw InfeasibleError(
          "grasp is not force-closure: the line between the contact points leaves a friction "
          "cone");
    }
  }

  BuiltProgram built;
  built.kind = ProgramKind::frictional;
  built.K = coefs.grid.intervals();
  for (const auto* r : robots) built.dof.push_back(r->dof());
  for (const auto& c : contacts) built.wrench_dims.push_back(c.wrench_dim());
  built.contacts = contacts;
  built.sdot0 = sdot0;
  built.sdotT = sdotT;

  // The contact attach points must coincide with the kinematic grasp points.
  std::vector<GraspAtPose> grasp_nodes(static_cast<size_t>(built.K + 1));
  for (int k = 0; k <= built.K; ++k) {
    grasp_nodes[static_cast<size_t>(k)] =
        grasp_at_pose(contacts, coefs.object_poses[static_cast<size_t>(k)]);
    for (size_t i = 0; i < contacts.size(); ++i) {
      const double diff = (grasp_nodes[static_cast<size_t>(k)].g_blocks[i] -
                           coefs.g_blocks[static_cast<size_t>(k)][i])
                              .norm();
      if (diff > 1e-8) {
        throw ModelError("contact " + std::to_string(i) +
                         " attach point disagrees with the grasp offset (node " +
                         std::to_string(k) + ")");
      }
    }
  }

  build_skeleton(built, coefs, robots, sdot0, sdotT);
  ConicProgram& p = built.program;

  const int n_total = std::accumulate(built.dof.begin(), built.dof.end(), 0);
  int row = 0;
  for (int k = 0; k <= built.K; ++k) {
    const GraspAtPose& grasp = grasp_nodes[static_cast<size_t>(k)];

    int tau_row = row;
    for (size_t i = 0; i < robots.size(); ++i) {
      add_torque_core(built, coefs, static_cast<int>(i), k, tau_row);
      // J_i' (h_M + h_I) with h = blockdiag(R,R) B f.
      const Mat6X& jac = coefs.robots[i].J[static_cast<size_t>(k)];
      Mat6 rr = Mat6::Zero();
      rr.topLeftCorner<3, 3>() = grasp.contact_frames[i];
      rr.bottomRightCorner<3, 3>() = grasp.contact_frames[i];
      const MatX coupling = jac.transpose() * rr * contacts[i].wrench_basis();  // n_i x m_i
      for (int j = 0; j < robots[i]->dof(); ++j) {
        for (int r = 0; r < contacts[i].wrench_dim(); ++r) {
          if (coupling(j, r) != 0.0) {
            p.add_eq(tau_row + j, built.var_f_motion(static_cast<int>(i), k, r), -coupling(j, r));
            p.add_eq(tau_row + j, built.var_f_internal(static_cast<int>(i), k, r),
                     -coupling(j, r));
          }
        }
      }
      tau_row += robots[i]->dof();
    }
    row += n_total;

    add_object_rows(built, coefs, k, row);
    row += 6;

    // h_O = sum_i Gbar_i (f_M + f_I)
    for (int r = 0; r < 6; ++r) {
      const int wrench_row = row + r;
      p.add_eq(wrench_row, built.var_h_object(k, r), 1.0);
      for (size_t i = 0; i < contacts.size(); ++i) {
        const MatX& g_bar = grasp.g_bar_blocks[i];
        for (int c = 0; c < g_bar.cols(); ++c) {
          if (g_bar(r, c) != 0.0) {
            p.add_eq(wrench_row, built.var_f_motion(static_cast<int>(i), k, c), -g_bar(r, c));
            p.add_eq(wrench_row, built.var_f_internal(static_cast<int>(i), k, c), -g_bar(r, c));
          }
        }
      }
      p.eq_rhs[wrench_row] = 0.0;
    }
    row += 6;

    // sum_i Gbar_i f_I = 0, skipping rows with no support (planar grasps
    // cannot generate out-of-plane wrenches; those rows are identically 0).
    for (int r = 0; r < 6; ++r) {
      double magnitude = 0.0;
      for (size_t i = 0; i < contacts.size(); ++i) {
        magnitude += grasp.g_bar_blocks[i].row(r).cwiseAbs().sum();
      }
      if (magnitude < 1e-14) continue;
      for (size_t i = 0; i < contacts.size(); ++i) {
        const MatX& g_bar = grasp.g_bar_blocks[i];
        for (int c = 0; c < g_bar.cols(); ++c) {
          if (g_bar(r, c) != 0.0) {
            p.add_eq(row, built.var_f_internal(static_cast<int>(i), k, c), g_bar(r, c));
          }
        }
      }
      p.eq_rhs[row] = 0.0;
      ++row;
    }

    // Friction cones: (f_M + f_I) in FC, f_I in the margined interior.
    for (size_t i = 0; i < contacts.size(); ++i) {
      const ContactModel& contact = contacts[i];
      const int ci = static_cast<int>(i);
      const std::string tag = "[" + std::to_string(i) + "][" + std::to_string(k) + "]";

      const auto add_force_cone = [&](bool internal_only, double margin,
                                      const std::string& label) {
        ConicProgram::AffineSoc cone;
        cone.label = label;
        if (contact.kind == ContactKind::point_planar) {
          cone.dim = 2;
          cone.offset = VecX::Zero(2);
          cone.offset[0] = -margin;
          cone.rows.push_back({0, built.var_f_internal(ci, k, 0), contact.mu});
          if (!internal_only) cone.rows.push_back({0, built.var_f_motion(ci, k, 0), contact.mu});
          cone.rows.push_back({1, built.var_f_internal(ci, k, 1), 1.0});
          if (!internal_only) cone.rows.push_back({1, built.var_f_motion(ci, k, 1), 1.0});
        } else {
          cone.dim = 3;
          cone.offset = VecX::Zero(3);
          cone.offset[0] = -margin;
          cone.rows.push_back(
              {0, built.var_f_internal(ci, k, contact.normal_axis), contact.mu});
          if (!internal_only) {
            cone.rows.push_back(
                {0, built.var_f_motion(ci, k, contact.normal_axis), contact.mu});
          }
          int out_row = 1;
          for (int axis = 0; axis < 3; ++axis) {
            if (axis == contact.normal_axis) continue;
            cone.rows.push_back({out_row, built.var_f_internal(ci, k, axis), 1.0});
            if (!internal_only) cone.rows.push_back({out_row, built.var_f_motion(ci, k, axis), 1.0});
            ++out_row;
          }
        }
        p.affine_socs.push_back(std::move(cone));
      };

      add_force_cone(false, 0.0, "fc" + tag);
      add_force_cone(true, contact.delta1, "fc-int" + tag);

      if (contact.kind == ContactKind::soft_finger) {
        const auto add_torsion_cone = [&](bool internal_only, double margin,
                                          const std::string& label) {
          ConicProgram::AffineSoc cone;
          cone.label = label;
          cone.dim = 2;
          cone.offset = VecX::Zero(2);
          cone.offset[0] = -margin;
          cone.rows.push_back(
              {0, built.var_f_internal(ci, k, contact.normal_axis), contact.gamma});
          cone.rows.push_back({1, built.var_f_internal(ci, k, 3), 1.0});
          if (!internal_only) {
            cone.rows.push_back(
                {0, built.var_f_motion(ci, k, contact.normal_axis), contact.gamma});
            cone.rows.push_back({1, built.var_f_motion(ci, k, 3), 1.0});
          }
          p.affine_socs.push_back(std::move(cone));
        };
        add_torsion_cone(false, 0.0, "tc" + tag);
        add_torsion_cone(true, contact.delta2, "tc-int" + tag);
      }
    }
  }
  add_progression_rows(built, coefs, sdot0, sdotT, row);
  return built;
}

BuiltProgram build_fixed_distribution_program(const PathDynamicsCoefficients& coefs,
                                              const std::vector<const Manipulator*>& robots,
                                              const DistributionRule& rule, double sdot0,
                                              double sdotT) {
  BuiltProgram built;
  built.kind = ProgramKind::fixed_distribution;
  built.K = coefs.grid.intervals();
  for (const auto* r : robots) built.dof.push_back(r->dof());
  built.sdot0 = sdot0;
  built.sdotT = sdotT;

  built.distribution.resize(static_cast<size_t>(built.K + 1));
  for (int k = 0; k <= built.K; ++k) {
    const auto& g_blocks = coefs.g_blocks[static_cast<size_t>(k)];
    for (const Mat6& g : g_blocks) {
      if (min_singular_value(g) < 1e-9) {
        throw Error(Stage::build,
                    "grasp matrix block rank-deficient at node " + std::to_string(k));
      }
    }
    auto weights = rule.weights(g_blocks);
    Mat6 identity_check = Mat6::Zero();
    for (size_t i = 0; i < g_blocks.size(); ++i) identity_check += g_blocks[i] * weights[i];
    if ((identity_check - Mat6::Identity()).norm() > 1e-6) {
      throw Error(Stage::build, "distribution '" + rule.name +
                                    "' does not resolve the object wrench (sum G_i W_i != I)");
    }
    built.distribution[static_cast<size_t>(k)] = std::move(weights);
  }

  build_skeleton(built, coefs, robots, sdot0, sdotT);
  ConicProgram& p = built.program;

  const int n_total = std::accumulate(built.dof.begin(), built.dof.end(), 0);
  int row = 0;
  for (int k = 0; k <= built.K; ++k) {
    int tau_row = row;
    for (size_t i = 0; i < robots.size(); ++i) {
      add_torque_core(built, coefs, static_cast<int>(i), k, tau_row);
      // tau = ... + J_i' W_i h_O
      const MatX coupling = coefs.robots[i].J[static_cast<size_t>(k)].transpose() *
                            built.distribution[static_cast<size_t>(k)][i];
      for (int j = 0; j < robots[i]->dof(); ++j) {
        for (int r = 0; r < 6; ++r) {
          if (coupling(j, r) != 0.0) {
            p.add_eq(tau_row + j, built.var_h_object(k, r), -coupling(j, r));
          }
        }
      }
      tau_row += robots[i]->dof();
    }
    row += n_total;
    add_object_rows(built, coefs, k, row);
    row += 6;
  }
  add_progression_rows(built, coefs, sdot0, sdotT, row);
  return built;
}

// ---------------------------------------------------------------------------
// Static feasibility screen

void check_static_feasibility(const PathDynamicsCoefficients& coefs,
                              const std::vector<const Manipulator*>& robots,
                              const BuiltProgram& built, const SolverSettings& settings) {
  SolverSettings mini_settings = settings;
  mini_settings.verbose = false;

  for (int k = 0; k <= built.K; ++k) {
    const size_t ks = static_cast<size_t>(k);

    if (built.kind == ProgramKind::fixed_distribution) {
      double violation = 0.0;
      for (size_t i = 0; i < robots.size(); ++i) {
        const VecX tau_static =
            coefs.robots[i].g.col(k) + coefs.robots[i].J[ks].transpose() *
                                           built.distribution[ks][i] * VecX(coefs.g_O);
        const JointLimits& limits = robots[i]->limits();
        for (int j = 0; j < robots[i]->dof(); ++j) {
          violation = std::max(violation, tau_static[j] - limits.torque_upper[j]);
          violation = std::max(violation, limits.torque_lower[j] - tau_static[j]);
        }
      }
      if (violation > 1e-7) {
        throw InfeasibleError("static torque infeasibility at s = " +
                              std::to_string(coefs.grid.node(k)) + " (node " + std::to_string(k) +
                              "): holding the object violates a torque bound by " +
                              std::to_string(violation));
      }
      continue;
    }

    // Free-wrench modes: minimize the bound relaxation t needed to hold the
    // object statically (a = b = 0).
    ConicProgram mini;
    const int t_var = mini.add_var("t", 0.0, kInf);
    mini.objective[t_var] = 1.0;

    std::vector<int> wrench_base;
    if (built.kind == ProgramKind::rigid) {
      for (size_t i = 0; i < robots.size(); ++i) {
        wrench_base.push_back(mini.num_vars);
        for (int r = 0; r < 6; ++r) {
          mini.add_free_var("h[" + std::to_string(i) + "][" + std::to_string(r) + "]");
        }
      }
    } else {
      for (size_t i = 0; i < built.contacts.size(); ++i) {
        wrench_base.push_back(mini.num_vars);
        const int m = built.wrench_dims[i];
        for (int r = 0; r < m; ++r) mini.add_free_var("fM[" + std::to_string(i) + "]");
        for (int r = 0; r < m; ++r) mini.add_free_var("fI[" + std::to_string(i) + "]");
      }
    }

    int row = 0;
    const GraspAtPose grasp = built.kind == ProgramKind::frictional
                                  ? grasp_at_pose(built.contacts, coefs.object_poses[ks])
                                  : GraspAtPose{};
    // Wrench balance: sum of contact wrenches equals the static object wrench.
    for (int r = 0; r < 6; ++r) {
      double magnitude = 0.0;
      if (built.kind == ProgramKind::rigid) {
        magnitude = 1.0;
        for (size_t i = 0; i < robots.size(); ++i) {
          const Mat6& g = coefs.g_blocks[ks][i];
          for (int c = 0; c < 6; ++c) {
            if (g(r, c) != 0.0) mini.add_eq(row, wrench_base[i] + c, g(r, c));
          }
        }
      } else {
        for (size_t i = 0; i < built.contacts.size(); ++i) {
          const MatX& g_bar = grasp.g_bar_blocks[i];
          magnitude += g_bar.row(r).cwiseAbs().sum();
          for (int c = 0; c < g_bar.cols(); ++c) {
            if (g_bar(r, c) != 0.0) {
              mini.add_eq(row, wrench_base[i] + c, g_bar(r, c));
              mini.add_eq(row, wrench_base[i] + built.wrench_dims[i] + c, g_bar(r, c));
            }
          }
        }
        if (magnitude < 1e-14) {
          if (std::abs(coefs.g_O[r]) > 1e-9) {
            throw InfeasibleError("static infeasibility at node " + std::to_string(k) +
                                  ": contacts cannot generate the required wrench component " +
                                  std::to_string(r));
          }
          continue;
        }
      }
      mini.eq_rhs[row] = coefs.g_O[r];
      ++row;
    }
    if (built.kind == ProgramKind::frictional) {
      // Internal wrenches cancel.
      for (int r = 0; r < 6; ++r) {
        double magnitude = 0.0;
        for (size_t i = 0; i < built.contacts.size(); ++i) {
          magnitude += grasp.g_bar_blocks[i].row(r).cwiseAbs().sum();
        }
        if (magnitude < 1e-14) continue;
        for (size_t i = 0; i < built.contacts.size(); ++i) {
          const MatX& g_bar = grasp.g_bar_blocks[i];
          for (int c = 0; c < g_bar.cols(); ++c) {
            if (g_bar(r, c) != 0.0) {
              mini.add_eq(row, wrench_base[i] + built.wrench_dims[i] + c, g_bar(r, c));
            }
          }
        }
        mini.eq_rhs[row] = 0.0;
        ++row;
      }
    }

    // Torque bounds relaxed by t: tau_lo - t <= g + J'h <= tau_hi + t via
    // nonnegative slacks.
    for (size_t i = 0; i < robots.size(); ++i) {
      const Mat6X& jac = coefs.robots[i].J[ks];
      MatX coupling;  // n_i x (wrench vars of robot i)
      if (built.kind == ProgramKind::rigid) {
        coupling = jac.transpose();
      } else {
        Mat6 rr = Mat6::Zero();
        rr.topLeftCorner<3, 3>() = grasp.contact_frames[i];
        rr.bottomRightCorner<3, 3>() = grasp.contact_frames[i];
        coupling = jac.transpose() * rr * built.contacts[i].wrench_basis();
      }
      const JointLimits& limits = robots[i]->limits();
      for (int j = 0; j < robots[i]->dof(); ++j) {
        const double g_j = coefs.robots[i].g(j, k);
        const int slack_hi = mini.add_nonneg_var("s_hi");
        const int slack_lo = mini.add_nonneg_var("s_lo");
        // (J'h)_j + slack_hi - t = tau_hi - g_j
        for (int c = 0; c < coupling.cols(); ++c) {
          if (coupling(j, c) != 0.0) {
            mini.add_eq(row, wrench_base[i] + c, coupling(j, c));
            if (built.kind == ProgramKind::frictional) {
              mini.add_eq(row, wrench_base[i] + built.wrench_dims[i] + c, coupling(j, c));
            }
          }
        }
        mini.add_eq(row, slack_hi, 1.0);
        mini.add_eq(row, t_var, -1.0);
        mini.eq_rhs[row] = limits.torque_upper[j] - g_j;
        ++row;
        // (J'h)_j - slack_lo + t = tau_lo - g_j
        for (int c = 0; c < coupling.cols(); ++c) {
          if (coupling(j, c) != 0.0) {
            mini.add_eq(row, wrench_base[i] + c, coupling(j, c));
            if (built.kind == ProgramKind::frictional) {
              mini.add_eq(row, wrench_base[i] + built.wrench_dims[i] + c, coupling(j, c));
            }
          }
        }
        mini.add_eq(row, slack_lo, -1.0);
        mini.add_eq(row, t_var, 1.0);
        mini.eq_rhs[row] = limits.torque_lower[j] - g_j;
        ++row;
      }
    }

    // Friction cones stay hard; only torque bounds are relaxed.
    if (built.kind == ProgramKind::frictional) {
      for (size_t i = 0; i < built.contacts.size(); ++i) {
        const ContactModel& contact = built.contacts[i];
        const int fm = wrench_base[i];
        const int fi = wrench_base[i] + built.wrench_dims[i];
        const auto add_cone = [&](bool internal_only, double margin) {
          ConicProgram::AffineSoc cone;
          const int normal = contact.kind == ContactKind::point_planar ? 0 : contact.normal_axis;
          if (contact.kind == ContactKind::point_planar) {
            cone.dim = 2;
            cone.offset = VecX::Zero(2);
            cone.offset[0] = -margin;
            cone.rows.push_back({0, fi + 0, contact.mu});
            cone.rows.push_back({1, fi + 1, 1.0});
            if (!internal_only) {
              cone.rows.push_back({0, fm + 0, contact.mu});
              cone.rows.push_back({1, fm + 1, 1.0});
            }
          } else {
            cone.dim = 3;
            cone.offset = VecX::Zero(3);
            cone.offset[0] = -margin;
            cone.rows.push_back({0, fi + normal, contact.mu});
            if (!internal_only) cone.rows.push_back({0, fm + normal, contact.mu});
            int out = 1;
            for (int axis = 0; axis < 3; ++axis) {
              if (axis == normal) continue;
              cone.rows.push_back({out, fi + axis, 1.0});
              if (!internal_only) cone.rows.push_back({out, fm + axis, 1.0});
              ++out;
            }
          }
          mini.affine_socs.push_back(std::move(cone));
        };
        add_cone(false, 0.0);
        add_cone(true, contact.delta1);
        if (contact.kind == ContactKind::soft_finger) {
          const auto add_torsion = [&](bool internal_only, double margin) {
            ConicProgram::AffineSoc cone;
            cone.dim = 2;
            cone.offset = VecX::Zero(2);
            cone.offset[0] = -margin;
            cone.rows.push_back({0, fi + contact.normal_axis, contact.gamma});
            cone.rows.push_back({1, fi + 3, 1.0});
            if (!internal_only) {
              cone.rows.push_back({0, fm + contact.normal_axis, contact.gamma});
              cone.rows.push_back({1, fm + 3, 1.0});
            }
            mini.affine_socs.push_back(std::move(cone));
          };
          add_torsion(false, 0.0);
          add_torsion(true, contact.delta2);
        }
      }
    }

    const SolveReport mini_report = solve(mini, mini_settings);
    if (mini_report.status == SolveStatus::infeasible) {
      throw InfeasibleError("static infeasibility at s = " + std::to_string(coefs.grid.node(k)) +
                            " (node " + std::to_string(k) +
                            "): no cone-feasible contact wrench holds the object");
    }
    if (mini_report.status == SolveStatus::optimal && mini_report.objective > 1e-6) {
      throw InfeasibleError("static torque infeasibility at s = " +
                            std::to_string(coefs.grid.node(k)) + " (node " + std::to_string(k) +
                            "): holding the object exceeds torque bounds by " +
                            std::to_string(mini_report.objective));
    }
  }
}

// ---------------------------------------------------------------------------
// Recovery

TrajectorySolution recover_trajectory(const BuiltProgram& built, const SolveReport& report,
                                      const PathDynamicsCoefficients& coefs,
                                      const SampledJointPath& sampled) {
  if (report.status == SolveStatus::infeasible) {
    throw InfeasibleError("program infeasible: " + report.message);
  }
  if (report.status != SolveStatus::optimal) {
    throw SolverError("solver did not reach an optimal solution (" +
                      std::string(status_name(report.status)) + ": " + report.message + ")");
  }

  const int K = built.K;
  const VecX& x = report.primal;

  TrajectorySolution sol;
  sol.kind = built.kind;
  sol.status = report.status;
  sol.objective = report.objective;
  sol.solve_wall_time_s = report.wall_time_s;
  sol.solver_iterations = report.iterations;

  sol.s.resize(K + 1);
  sol.b.resize(K + 1);
  sol.a.resize(K);
  sol.t.resize(K + 1);
  sol.h_object.resize(6, K + 1);
  for (int k = 0; k <= K; ++k) {
    sol.s[k] = coefs.grid.node(k);
    sol.b[k] = std::max(0.0, x[built.var_b(k)]);
    for (int r = 0; r < 6; ++r) sol.h_object(r, k) = x[built.var_h_object(k, r)];
  }
  for (int k = 0; k < K; ++k) sol.a[k] = x[built.var_a(k)];

  const double delta_s = coefs.grid.delta();
  sol.t[0] = 0.0;
  for (int k = 0; k < K; ++k) {
    const double denom = std::sqrt(sol.b[k]) + std::sqrt(sol.b[k + 1]);
    sol.t[k + 1] = denom > 1e-12 ? sol.t[k] + 2.0 * delta_s / denom : kInf;
  }
  sol.total_time = sol.t[K];

  const int num_robots = static_cast<int>(built.dof.size());
  sol.tau.resize(static_cast<size_t>(num_robots));
  sol.qdot.resize(static_cast<size_t>(num_robots));
  sol.qddot.resize(static_cast<size_t>(num_robots));
  for (int i = 0; i < num_robots; ++i) {
    const int n = built.dof[static_cast<size_t>(i)];
    sol.tau[static_cast<size_t>(i)].resize(n, K + 1);
    sol.qdot[static_cast<size_t>(i)].resize(n, K + 1);
    sol.qddot[static_cast<size_t>(i)].resize(n, K + 1);
    for (int k = 0; k <= K; ++k) {
      for (int j = 0; j < n; ++j) {
        sol.tau[static_cast<size_t>(i)](j, k) = x[built.var_tau(i, k, j)];
      }
      const double sdot = std::sqrt(sol.b[k]);
      const double a_node = sol.a[std::min(k, K - 1)];
      sol.qdot[static_cast<size_t>(i)].col(k) = sampled.dq[static_cast<size_t>(i)].col(k) * sdot;
      sol.qddot[static_cast<size_t>(i)].col(k) =
          sampled.dq[static_cast<size_t>(i)].col(k) * a_node +
          sampled.ddq[static_cast<size_t>(i)].col(k) * sol.b[k];
    }
  }

  switch (built.kind) {
    case ProgramKind::rigid: {
      sol.h_contact.resize(static_cast<size_t>(num_robots));
      for (int i = 0; i < num_robots; ++i) {
        MatX h(6, K + 1);
        for (int k = 0; k <= K; ++k) {
          for (int r = 0; r < 6; ++r) h(r, k) = x[built.var_h_contact(i, k, r)];
        }
        sol.h_contact[static_cast<size_t>(i)] = std::move(h);
      }
      break;
    }
    case ProgramKind::fixed_distribution: {
      sol.h_contact.resize(static_cast<size_t>(num_robots));
      for (int i = 0; i < num_robots; ++i) {
        MatX h(6, K + 1);
        for (int k = 0; k <= K; ++k) {
          h.col(k) = built.distribution[static_cast<size_t>(k)][static_cast<size_t>(i)] *
                     Vec6(sol.h_object.col(k));
        }
        sol.h_contact[static_cast<size_t>(i)] = std::move(h);
      }
      break;
    }
    case ProgramKind::frictional: {
      const int num_contacts = static_cast<int>(built.contacts.size());
      sol.f_motion.resize(static_cast<size_t>(num_contacts));
      sol.f_internal.resize(static_cast<size_t>(num_contacts));
      sol.h_internal.resize(static_cast<size_t>(num_contacts));
      sol.h_contact.resize(static_cast<size_t>(num_contacts));
      for (int i = 0; i < num_contacts; ++i) {
        const int m = built.wrench_dims[static_cast<size_t>(i)];
        MatX fm(m, K + 1), fi(m, K + 1), hi(6, K + 1), hc(6, K + 1);
        const MatX basis = built.contacts[static_cast<size_t>(i)].wrench_basis();
        for (int k = 0; k <= K; ++k) {
          for (int r = 0; r < m; ++r) {
            fm(r, k) = x[built.var_f_motion(i, k, r)];
            fi(r, k) = x[built.var_f_internal(i, k, r)];
          }
          const Mat3 frame = coefs.object_poses[static_cast<size_t>(k)].rotation *
                             built.contacts[static_cast<size_t>(i)].frame_in_object;
          Mat6 rr = Mat6::Zero();
          rr.topLeftCorner<3, 3>() = frame;
          rr.bottomRightCorner<3, 3>() = frame;
          hi.col(k) = rr * basis * fi.col(k);
          hc.col(k) = rr * basis * (fm.col(k) + fi.col(k));
        }
        sol.f_motion[static_cast<size_t>(i)] = std::move(fm);
        sol.f_internal[static_cast<size_t>(i)] = std::move(fi);
        sol.h_internal[static_cast<size_t>(i)] = std::move(hi);
        sol.h_contact[static_cast<size_t>(i)] = std::move(hc);
      }
      break;
    }
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Active constraints

ActiveConstraintReport active_constraint_report(const TrajectorySolution& solution,
                                                const std::vector<const Manipulator*>& robots,
                                                const PathDynamicsCoefficients& coefs,
                                                double tol) {
  const int nodes = static_cast<int>(solution.b.size());
  ActiveConstraintReport report;
  report.velocity_at_bound.assign(static_cast<size_t>(nodes), false);
  report.any_active.assign(static_cast<size_t>(nodes), false);

  for (size_t i = 0; i < robots.size(); ++i) {
    const JointLimits& limits = robots[i]->limits();
    const MatX& tau = solution.tau[i];
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> flags(tau.rows(), nodes);
    for (int k = 0; k < nodes; ++k) {
      for (int j = 0; j < tau.rows(); ++j) {
        const double range = limits.torque_upper[j] - limits.torque_lower[j];
        const bool at_bound = tau(j, k) >= limits.torque_upper[j] - tol * range ||
                              tau(j, k) <= limits.torque_lower[j] + tol * range;
        flags(j, k) = at_bound;
        if (at_bound) report.any_active[static_cast<size_t>(k)] = true;
      }
    }
    report.torque_at_bound.push_back(std::move(flags));
  }

  for (int k = 0; k < nodes; ++k) {
    const double b_bar = coefs.b_bar[k];
    if (std::isfinite(b_bar) && b_bar - solution.b[k] <= tol * b_bar) {
      report.velocity_at_bound[static_cast<size_t>(k)] = true;
      report.any_active[static_cast<size_t>(k)] = true;
    }
  }

  int active = 0, interior_active = 0;
  for (int k = 0; k < nodes; ++k) {
    if (report.any_active[static_cast<size_t>(k)]) {
      ++active;
      if (k > 0 && k < nodes - 1) ++interior_active;
    }
  }
  report.fraction_active = static_cast<double>(active) / nodes;
  report.interior_fraction_active =
      nodes > 2 ? static_cast<double>(interior_active) / (nodes - 2) : 0.0;
  return report;
}

void write_solution_csv(const std::string& filename, const TrajectorySolution& solution,
                        const ActiveConstraintReport* active) {
  std::ofstream out(filename);
  if (!out) throw Error(Stage::io, "cannot open '" + filename + "' for writing");
  out << std::setprecision(12);

  out << "s,b,a,t";
  for (size_t i = 0; i < solution.tau.size(); ++i) {
    for (int j = 0; j < solution.tau[i].rows(); ++j) {
      out << ",tau_" << i << "_" << j;
    }
  }
  for (size_t i = 0; i < solution.qdot.size(); ++i) {
    for (int j = 0; j < solution.qdot[i].rows(); ++j) {
      out << ",qdot_" << i << "_" << j;
    }
  }
  static const char* kWrenchComp[6] = {"fx", "fy", "fz", "mx", "my", "mz"};
  for (size_t i = 0; i < solution.h_contact.size(); ++i) {
    for (int r = 0; r < 6; ++r) out << ",h_" << i << "_" << kWrenchComp[r];
  }
  for (size_t i = 0; i < solution.f_motion.size(); ++i) {
    for (int r = 0; r < solution.f_motion[i].rows(); ++r) out << ",fM_" << i << "_" << r;
    for (int r = 0; r < solution.f_internal[i].rows(); ++r) out << ",fI_" << i << "_" << r;
  }
  if (active != nullptr) out << ",active_torque,active_velocity,active_any";
  out << "\n";

  const int nodes = static_cast<int>(solution.b.size());
  for (int k = 0; k < nodes; ++k) {
    out << solution.s[k] << "," << solution.b[k] << ","
        << solution.a[std::min(k, nodes - 2)] << "," << solution.t[k];
    for (const MatX& tau : solution.tau) {
      for (int j = 0; j < tau.rows(); ++j) out << "," << tau(j, k);
    }
    for (const MatX& qd : solution.qdot) {
      for (int j = 0; j < qd.rows(); ++j) out << "," << qd(j, k);
    }
    for (const MatX& h : solution.h_contact) {
      for (int r = 0; r < 6; ++r) out << "," << h(r, k);
    }
    for (size_t i = 0; i < solution.f_motion.size(); ++i) {
      for (int r = 0; r < solution.f_motion[i].rows(); ++r) {
        out << "," << solution.f_motion[i](r, k);
      }
      for (int r = 0; r < solution.f_internal[i].rows(); ++r) {
        out << "," << solution.f_internal[i](r, k);
      }
    }
    if (active != nullptr) {
      int torque_count = 0;
      for (const auto& flags : active->torque_at_bound) {
        for (int j = 0; j < flags.rows(); ++j) {
          if (flags(j, k)) ++torque_count;
        }
      }
      out << "," << torque_count << "," << (active->velocity_at_bound[static_cast<size_t>(k)] ? 1 : 0)
          << "," << (active->any_active[static_cast<size_t>(k)] ? 1 : 0);
    }
    out << "\n";
  }
}

}  // namespace cotopt
