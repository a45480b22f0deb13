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

#include "cotopt/geometry.hpp"

#include <cmath>

namespace cotopt {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::config: return "config";
    case Stage::model: return "model";
    case Stage::kinematics: return "kinematics";
    case Stage::coefficients: return "coefficients";
    case Stage::build: return "build";
    case Stage::solve: return "solve";
    case Stage::audit: return "audit";
    case Stage::io: return "io";
  }
  return "unknown";
}

Mat3 skew(const Vec3& u) {
  Mat3 s;
  s << 0.0, -u.z(), u.y(),
       u.z(), 0.0, -u.x(),
      -u.y(), u.x(), 0.0;
  return s;
}

Mat3 rot_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return r;
}

Mat3 rot_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, 0, s,
       0, 1, 0,
      -s, 0, c;
  return r;
}

Mat3 rot_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return r;
}

Mat3 rotation_zyz(const Vec3& euler) {
  return rot_z(euler[0]) * rot_y(euler[1]) * rot_z(euler[2]);
}

Mat3 euler_rate_transform(const Vec3& euler) {
  // Columns are the instantaneous axes of the three elementary rotations,
  // expressed in the fixed frame: z, Rz(phi)*y, Rz(phi)*Ry(theta)*z.
  const double cphi = std::cos(euler[0]), sphi = std::sin(euler[0]);
  const double cth = std::cos(euler[1]), sth = std::sin(euler[1]);
  Mat3 t;
  t << 0.0, -sphi, cphi * sth,
       0.0, cphi, sphi * sth,
       1.0, 0.0, cth;
  return t;
}

Mat3 euler_rate_transform_checked(const Vec3& euler, double tol) {
  if (std::abs(std::sin(euler[1])) <= tol) {
    throw KinematicsError("ZYZ Euler rate transform singular: |sin(theta)| <= " +
                          std::to_string(tol) + " at theta = " + std::to_string(euler[1]));
  }
  return euler_rate_transform(euler);
}

Mat6 pose_rate_transform(const Vec3& euler) {
  Mat6 t = Mat6::Identity();
  t.bottomRightCorner<3, 3>() = euler_rate_transform(euler);
  return t;
}

bool is_rotation(const Mat3& r, double tol) {
  return (r.transpose() * r - Mat3::Identity()).norm() <= tol && r.determinant() > 0.0;
}

}  // namespace cotopt
