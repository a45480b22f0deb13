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

#ifndef COTOPT_SERIAL_CHAIN_HPP_
#define COTOPT_SERIAL_CHAIN_HPP_

#include <vector>

#include "cotopt/geometry.hpp"

namespace cotopt {

enum class JointType { revolute, prismatic };

/// One link of a standard-DH serial chain. The joint variable adds to theta
/// (revolute) or d (prismatic). Mass properties are expressed in the link's
/// own DH frame, COM relative to the frame origin.
struct DhLink {
  JointType type = JointType::revolute;
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta = 0.0;
  double mass = 0.0;
  Vec3 com = Vec3::Zero();
  Mat3 inertia = Mat3::Zero();  // about COM, link frame
};

/// Fixed-base serial chain: kinematics and inverse dynamics in the base frame.
class SerialChain {
 public:
  explicit SerialChain(std::vector<DhLink> links) : links_(std::move(links)) {}

  int dof() const { return static_cast<int>(links_.size()); }
  const std::vector<DhLink>& links() const { return links_; }

  /// Transform from the base frame to each link frame (size dof), end-effector last.
  std::vector<Pose> link_poses(const VecX& q) const;
  Pose end_effector(const VecX& q) const;

  /// Geometric Jacobian at the end-effector origin, base frame, rows [v; omega].
  Mat6X jacobian(const VecX& q) const;

  /// Inverse dynamics: joint forces for the motion (q, qd, qdd) under gravity
  /// `g` given in the base frame. No external tip wrench.
  VecX rne(const VecX& q, const VecX& qd, const VecX& qdd, const Vec3& gravity) const;

  /// M(q) assembled column-wise from unit-acceleration inverse dynamics.
  MatX mass_matrix(const VecX& q) const;
  /// Gravity load vector.
  VecX gravity_vec(const VecX& q, const Vec3& gravity) const;
  /// Coriolis/centrifugal force vector C(q, qd) qd via inverse dynamics.
  VecX coriolis_vector(const VecX& q, const VecX& qd) const;
  /// Coriolis matrix in Christoffel form from finite differences of M(q).
  MatX coriolis_matrix(const VecX& q, const VecX& qd, double step = 1e-5) const;

 private:
  std::vector<DhLink> links_;
};

}  // namespace cotopt

#endif  // COTOPT_SERIAL_CHAIN_HPP_
