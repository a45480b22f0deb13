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

#include "cotopt/rigid_object.hpp"

#include <Eigen/Eigenvalues>

namespace cotopt {

void RigidObjectModel::validate() const {
  if (mass <= 0.0) {
    throw ModelError("object mass must be positive, got " + std::to_string(mass));
  }
  if ((inertia_body - inertia_body.transpose()).norm() > 1e-9) {
    throw ModelError("object inertia tensor must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia_body);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw ModelError("object inertia tensor must be positive definite");
  }
}

ObjectDynamicsTerms eval_object_dynamics_terms(const RigidObjectModel& obj, const Pose& pose,
                                               const Vec3& omega) {
  if (!is_rotation(pose.rotation)) {
    throw ModelError("object pose rotation is not orthonormal");
  }
  const Mat3 inertia_world = pose.rotation * obj.inertia_body * pose.rotation.transpose();

  ObjectDynamicsTerms terms;
  terms.M = Mat6::Zero();
  terms.M.topLeftCorner<3, 3>() = obj.mass * Mat3::Identity();
  terms.M.bottomRightCorner<3, 3>() = inertia_world;

  terms.C = Mat6::Zero();
  terms.C.bottomRightCorner<3, 3>() = skew(omega) * inertia_world;

  terms.g = Vec6::Zero();
  terms.g.head<3>() = -obj.mass * obj.gravity;
  return terms;
}

Mat3 cuboid_inertia(double mass, const Vec3& dims) {
  if (mass <= 0.0 || dims.minCoeff() <= 0.0) {
    throw ModelError("cuboid inertia requires positive mass and dimensions");
  }
  const double a2 = dims.x() * dims.x();
  const double b2 = dims.y() * dims.y();
  const double c2 = dims.z() * dims.z();
  Mat3 inertia = Mat3::Zero();
  inertia(0, 0) = mass * (b2 + c2) / 12.0;
  inertia(1, 1) = mass * (a2 + c2) / 12.0;
  inertia(2, 2) = mass * (a2 + b2) / 12.0;
  return inertia;
}

Mat3 cylinder_inertia(double mass, double radius, double length, int axis) {
  if (mass <= 0.0 || radius <= 0.0 || length <= 0.0 || axis < 0 || axis > 2) {
    throw ModelError("cylinder inertia requires positive mass/radius/length and axis in 0..2");
  }
  const double axial = 0.5 * mass * radius * radius;
  const double transverse = mass * (3.0 * radius * radius + length * length) / 12.0;
  Mat3 inertia = transverse * Mat3::Identity();
  inertia(axis, axis) = axial;
  return inertia;
}

}  // namespace cotopt
