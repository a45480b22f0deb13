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

#ifndef COTOPT_GEOMETRY_HPP_
#define COTOPT_GEOMETRY_HPP_

#include "cotopt/common.hpp"

namespace cotopt {

struct Pose {
  Vec3 position = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();

  // this * other, treating the pose as a rigid transform.
  Pose operator*(const Pose& other) const {
    return {position + rotation * other.position, rotation * other.rotation};
  }
  Pose inverse() const { return {-(rotation.transpose() * position), rotation.transpose()}; }
  Vec3 apply(const Vec3& p) const { return position + rotation * p; }
};

/// Cross-product matrix: skew(u) * w == u.cross(w).
Mat3 skew(const Vec3& u);

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

/// Rz(phi) * Ry(theta) * Rz(psi) for euler = [phi, theta, psi].
Mat3 rotation_zyz(const Vec3& euler);

/// Map from ZYZ Euler rates to angular velocity: omega = T(euler) * euler_dot.
/// The forward map is finite everywhere, including at sin(theta) == 0 where
/// the matrix loses rank.
Mat3 euler_rate_transform(const Vec3& euler);

/// Same map, but refuses representation singularities: throws KinematicsError
/// when |sin(theta)| <= tol. Use when an invertible transform is required.
Mat3 euler_rate_transform_checked(const Vec3& euler, double tol = 1e-6);

/// blockdiag(I3, T(euler)): maps [p_dot; euler_dot] to [p_dot; omega].
Mat6 pose_rate_transform(const Vec3& euler);

bool is_rotation(const Mat3& r, double tol = 1e-9);

}  // namespace cotopt

#endif  // COTOPT_GEOMETRY_HPP_
