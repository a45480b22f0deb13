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

#include "cotopt/path_kinematics.hpp"

#include <cmath>
#include <future>

namespace cotopt {

Pose coupled_pose(const ObjectPath& path, const RigidObjectModel& obj, int robot, double s) {
  if (robot < 0 || robot >= static_cast<int>(obj.grasp_offsets.size())) {
    throw ModelError("coupled_pose: no grasp offset for robot " + std::to_string(robot));
  }
  const PathSample ps = path.sample(s);
  const GraspOffset& offset = obj.grasp_offsets[static_cast<size_t>(robot)];
  const Vec3 phi_i = ps.phi + offset.euler_zyz;
  const Mat3 r_ei = rotation_zyz(phi_i);
  return {ps.p + r_ei * offset.position, r_ei};
}

Vec3 coupled_offset_world(const ObjectPath& path, const RigidObjectModel& obj, int robot,
                          double s) {
  const GraspOffset& offset = obj.grasp_offsets[static_cast<size_t>(robot)];
  const Vec3 phi_i = path.sample(s).phi + offset.euler_zyz;
  return rotation_zyz(phi_i) * offset.position;
}

namespace {

MatX sweep_single_robot(const Manipulator& robot, const ObjectPath& path,
                        const RigidObjectModel& obj, int index, const VecX& s_samples,
                        const VecX& hint, double continuity_jump) {
  const int count = static_cast<int>(s_samples.size());
  MatX q(robot.dof(), count);
  VecX current_hint = hint;
  for (int j = 0; j < count; ++j) {
    const double s = s_samples[j];
    const Pose target = coupled_pose(path, obj, index, s);
    VecX qj;
    try {
      qj = robot.inverse_kin(target, current_hint);
    } catch (const KinematicsError& e) {
      throw KinematicsError("robot " + std::to_string(index) + " at s = " + std::to_string(s) +
                            ": " + e.what());
    }
    if (j > 0) {
      const double jump = (qj - q.col(j - 1)).cwiseAbs().maxCoeff();
      if (jump > continuity_jump) {
        throw KinematicsError("robot " + std::to_string(index) + ": joint branch jump of " +
                              std::to_string(jump) + " between s = " +
                              std::to_string(s_samples[j - 1]) + " and s = " + std::to_string(s));
      }
    }
    q.col(j) = qj;
    current_hint = qj;
  }
  return q;
}

}  // namespace

SampledJointPath sweep_inverse_kinematics(const std::vector<const Manipulator*>& robots,
                                          const ObjectPath& path, const RigidObjectModel& obj,
                                          const PathGrid& grid, const std::vector<VecX>& hints,
                                          const SweepOptions& options) {
  if (robots.size() != hints.size()) {
    throw KinematicsError("sweep: one initial hint per robot required");
  }
  if (options.refinement < 4) {
    throw KinematicsError("sweep: refinement grid must be at least 4x finer than the path grid");
  }
  const int fine_count = grid.intervals() * options.refinement + 1;
  VecX s_samples(fine_count);
  const double h = grid.delta() / options.refinement;
  for (int j = 0; j < fine_count; ++j) s_samples[j] = std::min(1.0, j * h);

  // Robots are independent; hints chain sequentially within each robot.
  std::vector<std::future<MatX>> futures;
  futures.reserve(robots.size());
  for (size_t i = 0; i < robots.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      return sweep_single_robot(*robots[i], path, obj, static_cast<int>(i), s_samples, hints[i],
                                options.continuity_jump);
    }));
  }

  SampledJointPath result;
  result.refinement = options.refinement;
  for (size_t i = 0; i < robots.size(); ++i) {
    const MatX q_fine = futures[i].get();
    MatX q, dq, ddq;
    differentiate_joint_path(s_samples, q_fine, grid, q, dq, ddq);
    result.q.push_back(std::move(q));
    result.dq.push_back(std::move(dq));
    result.ddq.push_back(std::move(ddq));
  }

  // The sampled path must reproduce the demanded poses at the nodes.
  for (size_t i = 0; i < robots.size(); ++i) {
    for (int k = 0; k < grid.nodes(); ++k) {
      const Pose target = coupled_pose(path, obj, static_cast<int>(i), grid.node(k));
      const Pose reached = robots[i]->forward_kin(result.q[i].col(k));
      const double residual = std::max((reached.position - target.position).norm(),
                                       (reached.rotation - target.rotation).norm());
      if (residual > 1e-8) {
        throw KinematicsError("robot " + std::to_string(i) + ": FK residual " +
                              std::to_string(residual) + " at node " + std::to_string(k));
      }
    }
  }
  return result;
}

void differentiate_joint_path(const VecX& s_samples, const MatX& q_samples, const PathGrid& grid,
                              MatX& q, MatX& dq, MatX& ddq) {
  const int count = static_cast<int>(s_samples.size());
  if (q_samples.cols() != count) {
    throw KinematicsError("differentiate: sample count mismatch");
  }
  if ((count - 1) % grid.intervals() != 0) {
    throw KinematicsError("differentiate: samples do not refine the path grid");
  }
  const int refinement = (count - 1) / grid.intervals();
  if (refinement < 4) {
    throw KinematicsError("differentiate: refinement grid must be at least 4x finer");
  }
  const double h = s_samples[1] - s_samples[0];
  for (int j = 1; j < count; ++j) {
    if (std::abs((s_samples[j] - s_samples[j - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw KinematicsError("differentiate: non-uniform refinement grid rejected");
    }
  }

  const int n = static_cast<int>(q_samples.rows());
  q.resize(n, grid.nodes());
  dq.resize(n, grid.nodes());
  ddq.resize(n, grid.nodes());
  for (int k = 0; k < grid.nodes(); ++k) {
    const int j = k * refinement;
    q.col(k) = q_samples.col(j);
    if (j == 0) {
      dq.col(k) =
          (-3.0 * q_samples.col(0) + 4.0 * q_samples.col(1) - q_samples.col(2)) / (2.0 * h);
      ddq.col(k) = (2.0 * q_samples.col(0) - 5.0 * q_samples.col(1) + 4.0 * q_samples.col(2) -
                    q_samples.col(3)) /
                   (h * h);
    } else if (j == count - 1) {
      dq.col(k) =
          (3.0 * q_samples.col(j) - 4.0 * q_samples.col(j - 1) + q_samples.col(j - 2)) / (2.0 * h);
      ddq.col(k) = (2.0 * q_samples.col(j) - 5.0 * q_samples.col(j - 1) +
                    4.0 * q_samples.col(j - 2) - q_samples.col(j - 3)) /
                   (h * h);
    } else {
      dq.col(k) = (q_samples.col(j + 1) - q_samples.col(j - 1)) / (2.0 * h);
      ddq.col(k) =
          (q_samples.col(j + 1) - 2.0 * q_samples.col(j) + q_samples.col(j - 1)) / (h * h);
    }
  }
}

}  // namespace cotopt
