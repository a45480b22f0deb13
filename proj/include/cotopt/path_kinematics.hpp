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

#ifndef COTOPT_PATH_KINEMATICS_HPP_
#define COTOPT_PATH_KINEMATICS_HPP_

#include <vector>

#include "cotopt/manipulator.hpp"
#include "cotopt/object_path.hpp"
#include "cotopt/rigid_object.hpp"

namespace cotopt {

/// End-effector pose demanded from robot i when the object tracks the path:
/// p_i = p_O + R_Ei p_iO^{Ei} with phi_i = phi_O + phi_iO (ZYZ, additive).
Pose coupled_pose(const ObjectPath& path, const RigidObjectModel& obj, int robot, double s);

/// World-frame vector from the object's COM to robot i's grasp point.
Vec3 coupled_offset_world(const ObjectPath& path, const RigidObjectModel& obj, int robot,
                          double s);

/// Joint path of every robot sampled at the grid nodes, with numerical
/// derivatives with respect to s.
struct SampledJointPath {
  // Per robot: n_i x (K+1).
  std::vector<MatX> q, dq, ddq;
  int refinement = 0;  // fine samples per coarse interval
};

struct SweepOptions {
  int refinement = 10;          // fine grid factor, >= 4
  double continuity_jump = 0.25;  // max joint jump between fine samples (rad or m)
};

/// Inverse kinematics along the path for all robots, chaining branch hints
/// node to node. Throws KinematicsError on unreachable poses or branch jumps.
SampledJointPath sweep_inverse_kinematics(const std::vector<const Manipulator*>& robots,
                                          const ObjectPath& path, const RigidObjectModel& obj,
                                          const PathGrid& grid, const std::vector<VecX>& hints,
                                          const SweepOptions& options = {});

/// Central finite differences of a joint path sampled on a uniform refinement
/// of the grid (one-sided second-order stencils at s = 0 and s = 1). Input
/// columns are samples at s_samples; outputs are at the grid nodes. Exact for
/// polynomials up to degree 2. Rejects non-uniform sample spacing.
void differentiate_joint_path(const VecX& s_samples, const MatX& q_samples, const PathGrid& grid,
                              MatX& q, MatX& dq, MatX& ddq);

}  // namespace cotopt

#endif  // COTOPT_PATH_KINEMATICS_HPP_
