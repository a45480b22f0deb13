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

#include "cotopt/manipulator.hpp"

#include <cmath>
#include <limits>

#include "cotopt/rigid_object.hpp"

namespace cotopt {

namespace {

constexpr double kIkTol = 1e-8;

void validate_limits(const JointLimits& limits, int n, const std::string& who) {
  if (limits.torque_lower.size() != n || limits.torque_upper.size() != n ||
      limits.velocity.size() != n) {
    throw ModelError(who + ": joint limit vectors must have length " + std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    if (!(limits.torque_lower[i] < limits.torque_upper[i])) {
      throw ModelError(who + ": torque_lower must be < torque_upper at joint " +
                       std::to_string(i));
    }
    if (!(limits.velocity[i] > 0.0)) {
      throw ModelError(who + ": velocity bound must be positive at joint " + std::to_string(i));
    }
  }
}

double wrap_near(double angle, double reference) {
  return angle + 2.0 * M_PI * std::round((reference - angle) / (2.0 * M_PI));
}

double pose_error(const Pose& a, const Pose& b) {
  return std::max((a.position - b.position).norm(), (a.rotation - b.rotation).norm());
}

}  // namespace

Manipulator::Manipulator(Pose base, JointLimits limits, Vec3 gravity)
    : base_(std::move(base)), limits_(std::move(limits)), gravity_(std::move(gravity)) {
  if (!is_rotation(base_.rotation)) {
    throw ModelError("manipulator base rotation is not orthonormal");
  }
}

// ---------------------------------------------------------------------------
// RailCarriage

RailCarriage::RailCarriage(double carriage_mass, Pose base, JointLimits limits, Vec3 gravity)
    : Manipulator(std::move(base), std::move(limits), std::move(gravity)), mass_(carriage_mass) {
  if (mass_ <= 0.0) throw ModelError("rail carriage mass must be positive");
  validate_limits(limits_, 1, "rail-carriage");
  axis_world_ = base_.rotation.col(0);
}

MatX RailCarriage::mass_matrix(const VecX&) const {
  MatX m(1, 1);
  m(0, 0) = mass_;
  return m;
}

MatX RailCarriage::coriolis(const VecX&, const VecX&) const { return MatX::Zero(1, 1); }

VecX RailCarriage::coriolis_vector(const VecX&, const VecX&) const { return VecX::Zero(1); }

VecX RailCarriage::gravity_vec(const VecX&) const {
  VecX g(1);
  g[0] = -mass_ * gravity_.dot(axis_world_);
  return g;
}

Mat6X RailCarriage::jacobian(const VecX&) const {
  Mat6X jac = Mat6X::Zero(6, 1);
  jac.col(0).head<3>() = axis_world_;
  return jac;
}

Pose RailCarriage::forward_kin(const VecX& q) const {
  return {base_.position + q[0] * axis_world_, base_.rotation};
}

VecX RailCarriage::inverse_kin(const Pose& target, const VecX&) const {
  VecX q(1);
  q[0] = axis_world_.dot(target.position - base_.position);
  const Pose reached = forward_kin(q);
  if (pose_error(reached, target) > kIkTol) {
    throw KinematicsError("rail-carriage: target pose is off the rail (residual " +
                          std::to_string(pose_error(reached, target)) + ")");
  }
  return q;
}

// ---------------------------------------------------------------------------
// PlanarArm

PlanarArm::PlanarArm(std::vector<double> lengths, std::vector<double> masses, Pose base,
                     JointLimits limits, Vec3 gravity)
    : Manipulator(std::move(base), std::move(limits), std::move(gravity)),
      chain_([&] {
        if (lengths.size() != masses.size() || (lengths.size() != 2 && lengths.size() != 3)) {
          throw ModelError("planar arm supports 2 or 3 links with matching masses");
        }
        std::vector<DhLink> links;
        for (size_t i = 0; i < lengths.size(); ++i) {
          if (lengths[i] <= 0.0 || masses[i] <= 0.0) {
            throw ModelError("planar arm link lengths and masses must be positive");
          }
          DhLink link;
          link.type = JointType::revolute;
          link.a = lengths[i];
          link.mass = masses[i];
          link.com = Vec3::Zero();  // point mass at the link tip (frame origin)
          link.inertia = Mat3::Zero();
          links.push_back(link);
        }
        return SerialChain(links);
      }()),
      lengths_(lengths) {
  validate_limits(limits_, chain_.dof(), "planar-arm");
  // Chain z (joint axes) maps to base +y; the chain x-y plane maps to the
  // base x-z plane (chain +y toward base -z).
  chain_base_ = base_ * Pose{Vec3::Zero(), rot_x(-M_PI / 2.0)};
  gravity_chain_ = chain_base_.rotation.transpose() * gravity_;
}

MatX PlanarArm::mass_matrix(const VecX& q) const { return chain_.mass_matrix(q); }

MatX PlanarArm::coriolis(const VecX& q, const VecX& qd) const {
  return chain_.coriolis_matrix(q, qd);
}

VecX PlanarArm::coriolis_vector(const VecX& q, const VecX& qd) const {
  return chain_.coriolis_vector(q, qd);
}

VecX PlanarArm::gravity_vec(const VecX& q) const {
  return chain_.gravity_vec(q, gravity_chain_);
}

Mat6X PlanarArm::jacobian(const VecX& q) const {
  Mat6X jac = chain_.jacobian(q);
  jac.topRows<3>() = chain_base_.rotation * jac.topRows<3>();
  jac.bottomRows<3>() = chain_base_.rotation * jac.bottomRows<3>();
  return jac;
}

Pose PlanarArm::forward_kin(const VecX& q) const { return chain_base_ * chain_.end_effector(q); }

VecX PlanarArm::inverse_kin(const Pose& target, const VecX& hint) const {
  const int n = dof();
  const Pose local = chain_base_.inverse() * target;
  if (std::abs(local.position.z()) > 1e-7) {
    throw KinematicsError("planar-arm: target position is out of the arm's plane by " +
                          std::to_string(local.position.z()) + " m");
  }
  double u = local.position.x();
  double v = local.position.y();

  double tool_angle = 0.0;
  if (n == 3) {
    const Mat3& r = local.rotation;
    const double planarity = std::abs(r(2, 2) - 1.0) + std::abs(r(0, 2)) + std::abs(r(1, 2)) +
                             std::abs(r(2, 0)) + std::abs(r(2, 1));
    if (planarity > 1e-7) {
      throw KinematicsError("planar-arm: target orientation is not a rotation in the arm's plane");
    }
    tool_angle = std::atan2(r(1, 0), r(0, 0));
    u -= lengths_[2] * std::cos(tool_angle);
    v -= lengths_[2] * std::sin(tool_angle);
  }

  const double l1 = lengths_[0], l2 = lengths_[1];
  const double d2 = u * u + v * v;
  const double d = std::sqrt(d2);
  if (d > l1 + l2 + 1e-9 || d < std::abs(l1 - l2) - 1e-9) {
    throw KinematicsError("planar-arm: wrist target at distance " + std::to_string(d) +
                          " m outside reachable annulus [" + std::to_string(std::abs(l1 - l2)) +
                          ", " + std::to_string(l1 + l2) + "]");
  }
  double c2 = (d2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
  c2 = std::clamp(c2, -1.0, 1.0);
  const double elbow = std::acos(c2);

  VecX best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const double q2 : {elbow, -elbow}) {
    VecX q(n);
    q[1] = q2;
    q[0] = std::atan2(v, u) - std::atan2(l2 * std::sin(q2), l1 + l2 * std::cos(q2));
    if (n == 3) q[2] = tool_angle - q[0] - q[1];
    for (int j = 0; j < n; ++j) q[j] = wrap_near(q[j], hint[j]);
    const double dist = (q - hint).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = q;
    }
  }

  const Pose reached = forward_kin(best);
  const double position_err = (reached.position - target.position).norm();
  const double rotation_err = n == 3 ? (reached.rotation - target.rotation).norm() : 0.0;
  if (position_err > kIkTol || rotation_err > kIkTol) {
    throw KinematicsError("planar-arm: inverse kinematics residual " +
                          std::to_string(std::max(position_err, rotation_err)));
  }
  return best;
}

// ---------------------------------------------------------------------------
// StanfordArm

StanfordArm::StanfordArm(StanfordParams params, Pose base, JointLimits limits, Vec3 gravity)
    : Manipulator(std::move(base), std::move(limits), std::move(gravity)),
      params_(params),
      chain_([&] {
        const auto& p = params;
        if (p.masses.size() != 6 || p.radii.size() != 5) {
          throw ModelError("stanford arm requires 6 link masses and 5 radii");
        }
        std::vector<DhLink> links(6);
        // Column from base to shoulder; in frame 1 the world -z axis is +y.
        links[0] = {JointType::revolute, 0.0, -M_PI / 2.0, p.l1, 0.0, p.masses[0],
                    Vec3(0.0, p.l1 / 2.0, 0.0), cylinder_inertia(p.masses[0], p.radii[0], p.l1, 1)};
        // Lateral shoulder offset along joint-2 axis (frame-2 -y).
        links[1] = {JointType::revolute, 0.0, M_PI / 2.0, p.l2, 0.0, p.masses[1],
                    Vec3(0.0, -p.l2 / 2.0, 0.0),
                    cylinder_inertia(p.masses[1], p.radii[1], p.l2, 1)};
        // Telescoping boom, cuboid trailing behind the wrist along -z.
        links[2] = {JointType::prismatic, 0.0, 0.0, 0.0, 0.0, p.masses[2],
                    Vec3(0.0, 0.0, -p.boom_length / 2.0),
                    cuboid_inertia(p.masses[2], Vec3(p.boom_side, p.boom_side, p.boom_length))};
        // Spherical wrist; small cylinders around the wrist centre.
        links[3] = {JointType::revolute, 0.0, -M_PI / 2.0, 0.0, 0.0, p.masses[3], Vec3::Zero(),
                    cylinder_inertia(p.masses[3], p.radii[2], p.l4, 2)};
        links[4] = {JointType::revolute, 0.0, M_PI / 2.0, 0.0, 0.0, p.masses[4], Vec3::Zero(),
                    cylinder_inertia(p.masses[4], p.radii[3], p.l5, 2)};
        // Flange link from wrist centre to the tool point.
        links[5] = {JointType::revolute, 0.0, 0.0, p.l6, 0.0, p.masses[5],
                    Vec3(0.0, 0.0, -p.l6 / 2.0),
                    cylinder_inertia(p.masses[5], p.radii[4], p.l6, 2)};
        return SerialChain(links);
      }()) {
  validate_limits(limits_, 6, "stanford");
  gravity_base_ = base_.rotation.transpose() * gravity_;
}

MatX StanfordArm::mass_matrix(const VecX& q) const { return chain_.mass_matrix(q); }

MatX StanfordArm::coriolis(const VecX& q, const VecX& qd) const {
  return chain_.coriolis_matrix(q, qd);
}

VecX StanfordArm::coriolis_vector(const VecX& q, const VecX& qd) const {
  return chain_.coriolis_vector(q, qd);
}

VecX StanfordArm::gravity_vec(const VecX& q) const {
  return chain_.gravity_vec(q, gravity_base_);
}

Mat6X StanfordArm::jacobian(const VecX& q) const {
  Mat6X jac = chain_.jacobian(q);
  jac.topRows<3>() = base_.rotation * jac.topRows<3>();
  jac.bottomRows<3>() = base_.rotation * jac.bottomRows<3>();
  return jac;
}

Pose StanfordArm::forward_kin(const VecX& q) const { return base_ * chain_.end_effector(q); }

VecX StanfordArm::inverse_kin(const Pose& target, const VecX& hint) const {
  const Pose local = base_.inverse() * target;
  const Vec3 wrist = local.position - params_.l6 * local.rotation.col(2);
  const Vec3 w(wrist.x(), wrist.y(), wrist.z() - params_.l1);

  const double rho2 = w.x() * w.x() + w.y() * w.y();
  const double l2 = params_.l2;
  if (rho2 < l2 * l2 - 1e-12) {
    throw KinematicsError("stanford: wrist target inside the shoulder offset cylinder");
  }
  const double r_abs = std::sqrt(std::max(0.0, rho2 - l2 * l2));

  VecX best;
  double best_residual = std::numeric_limits<double>::infinity();
  double best_dist = std::numeric_limits<double>::infinity();
  for (const double r : {r_abs, -r_abs}) {
    VecX q(6);
    q[0] = std::atan2(w.y(), w.x()) - std::atan2(l2, r);
    q[1] = std::atan2(r, w.z());
    q[2] = std::hypot(r, w.z());

    const Mat3 r3 =
        rot_z(q[0]) * rot_x(-M_PI / 2.0) * rot_z(q[1]) * rot_x(M_PI / 2.0);
    const Mat3 r36 = r3.transpose() * local.rotation;

    const double sy = std::hypot(r36(0, 2), r36(1, 2));
    for (const int wrist_branch : {1, -1}) {
      if (sy > 1e-10) {
        q[4] = std::atan2(wrist_branch * sy, r36(2, 2));
        q[3] = std::atan2(wrist_branch * r36(1, 2), wrist_branch * r36(0, 2));
        q[5] = std::atan2(wrist_branch * r36(2, 1), -wrist_branch * r36(2, 0));
      } else if (r36(2, 2) > 0.0) {
        // q5 = 0: only q4 + q6 is determined; keep q4 at the hint.
        q[4] = 0.0;
        q[3] = hint[3];
        q[5] = std::atan2(r36(1, 0), r36(0, 0)) - q[3];
      } else {
        // q5 = pi: only q4 - q6 is determined.
        q[4] = M_PI;
        q[3] = hint[3];
        q[5] = q[3] - std::atan2(-r36(1, 0), -r36(0, 0));
      }
      VecX cand = q;
      for (int j : {0, 1, 3, 4, 5}) cand[j] = wrap_near(cand[j], hint[j]);
      const double residual = pose_error(forward_kin(cand), target);
      const double dist = (cand - hint).norm();
      if (residual <= kIkTol && dist < best_dist) {
        best_dist = dist;
        best = cand;
      }
      best_residual = std::min(best_residual, residual);
      if (sy <= 1e-10) break;  // both wrist branches coincide at the singularity
    }
  }
  if (best.size() == 0) {
    throw KinematicsError("stanford: inverse kinematics failed, best residual " +
                          std::to_string(best_residual));
  }
  return best;
}

}  // namespace cotopt
