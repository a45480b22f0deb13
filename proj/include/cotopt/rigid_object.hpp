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

#ifndef COTOPT_RIGID_OBJECT_HPP_
#define COTOPT_RIGID_OBJECT_HPP_

#include <vector>

#include "cotopt/geometry.hpp"

namespace cotopt {

/// Constant offset between the object frame {O} and an end-effector frame
/// {E_i}: position expressed in {E_i}, orientation as an additive ZYZ triple.
struct GraspOffset {
  Vec3 position = Vec3::Zero();   // p_iO^{Ei}
  Vec3 euler_zyz = Vec3::Zero();  // phi_iO
};

struct RigidObjectModel {
  double mass = 1.0;
  Mat3 inertia_body = Mat3::Identity();  // about COM, body frame
  Vec3 gravity{0.0, 0.0, -9.81};
  std::vector<GraspOffset> grasp_offsets;

  void validate() const;
};

struct ObjectDynamicsTerms {
  Mat6 M;  // blockdiag(m I, I_O) with I_O in a frame parallel to the inertial one
  Mat6 C;  // lower-right block S(omega) I_O
  Vec6 g;  // [-m g; 0]
};

/// Newton-Euler terms of the object at the given pose and angular velocity.
/// Throws ModelError when the pose rotation is not orthonormal.
ObjectDynamicsTerms eval_object_dynamics_terms(const RigidObjectModel& obj, const Pose& pose,
                                               const Vec3& omega);

/// Inertia tensor of a uniform solid cuboid with side lengths dims, about its
/// COM, axes aligned with the sides.
Mat3 cuboid_inertia(double mass, const Vec3& dims);

/// Inertia tensor of a uniform solid cylinder, length along `axis` (0/1/2).
Mat3 cylinder_inertia(double mass, double radius, double length, int axis);

}  // namespace cotopt

#endif  // COTOPT_RIGID_OBJECT_HPP_
