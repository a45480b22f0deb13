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

#ifndef COTOPT_MANIPULATOR_HPP_
#define COTOPT_MANIPULATOR_HPP_

#include <memory>
#include <string>
#include <vector>

#include "cotopt/serial_chain.hpp"

namespace cotopt {

struct JointLimits {
  VecX torque_lower;
  VecX torque_upper;
  VecX velocity;  // symmetric bound, > 0 componentwise
};

/// A fixed-base manipulator. Kinematic outputs (poses, Jacobians) are in the
/// inertial frame; dynamics are in generalized coordinates. All evaluations
/// are pure functions of their inputs; instances are immutable after
/// construction and safe to share across threads.
class Manipulator {
 public:
  virtual ~Manipulator() = default;

  virtual int dof() const = 0;
  virtual std::string name() const = 0;

  const Pose& base_pose() const { return base_; }
  const JointLimits& limits() const { return limits_; }

  virtual MatX mass_matrix(const VecX& q) const = 0;
  /// Coriolis matrix in Christoffel form (so that Mdot - 2C is skew).
  virtual MatX coriolis(const VecX& q, const VecX& qd) const = 0;
  /// Coriolis/centrifugal force vector computed by inverse dynamics; equals
  /// coriolis(q, qd) * qd and serves as an independent audit path.
  virtual VecX coriolis_vector(const VecX& q, const VecX& qd) const = 0;
  virtual VecX gravity_vec(const VecX& q) const = 0;

  /// Geometric Jacobian at the end-effector, inertial frame.
  virtual Mat6X jacobian(const VecX& q) const = 0;
  virtual Pose forward_kin(const VecX& q) const = 0;
  /// Joint values reaching `target`, branch nearest to `hint`.
  /// Throws KinematicsError when the pose is unreachable.
  virtual VecX inverse_kin(const Pose& target, const VecX& hint) const = 0;

  Vec3 gravity() const { return gravity_; }

 protected:
  Manipulator(Pose base, JointLimits limits, Vec3 gravity);
  Pose base_;
  JointLimits limits_;
  Vec3 gravity_;
};

/// 1-DOF prismatic carriage sliding along an axis of its base frame (local x).
class RailCarriage : public Manipulator {
 public:
  RailCarriage(double carriage_mass, Pose base, JointLimits limits,
               Vec3 gravity = Vec3(0, 0, -9.81));

  int dof() const override { return 1; }
  std::string name() const override { return "rail-carriage"; }
  MatX mass_matrix(const VecX& q) const override;
  MatX coriolis(const VecX& q, const VecX& qd) const override;
  VecX coriolis_vector(const VecX& q, const VecX& qd) const override;
  VecX gravity_vec(const VecX& q) const override;
  Mat6X jacobian(const VecX& q) const override;
  Pose forward_kin(const VecX& q) const override;
  VecX inverse_kin(const Pose& target, const VecX& hint) const override;

 private:
  double mass_;
  Vec3 axis_world_;
};

/// Planar arm with n revolute joints (n = 2 or 3) and point-mass links.
/// The arm moves in the plane spanned by the base frame's x and z axes, with
/// joint axes along base +y. A 3-link arm also tracks in-plane orientation;
/// a 2-link arm solves position only.
class PlanarArm : public Manipulator {
 public:
  PlanarArm(std::vector<double> lengths, std::vector<double> masses, Pose base, JointLimits limits,
            Vec3 gravity = Vec3(0, 0, -9.81));

  int dof() const override { return chain_.dof(); }
  std::string name() const override { return "planar-arm"; }
  MatX mass_matrix(const VecX& q) const override;
  MatX coriolis(const VecX& q, const VecX& qd) const override;
  VecX coriolis_vector(const VecX& q, const VecX& qd) const override;
  VecX gravity_vec(const VecX& q) const override;
  Mat6X jacobian(const VecX& q) const override;
  Pose forward_kin(const VecX& q) const override;
  VecX inverse_kin(const Pose& target, const VecX& hint) const override;

 private:
  SerialChain chain_;
  Pose chain_base_;  // base_ composed with the plane-alignment rotation
  std::vector<double> lengths_;
  Vec3 gravity_chain_;
};

/// Geometry parameters of the 6-DOF Stanford-style arm: two revolute joints,
/// a prismatic boom, spherical wrist. Shape-derived inertia from uniform
/// density cylinders except the cuboid boom.
struct StanfordParams {
  std::vector<double> masses{15.0, 10.0, 8.0, 1.0, 0.7, 0.5};
  // l3 is the prismatic joint variable; boom_length sets the boom's inertia model.
  double l1 = 0.6, l2 = 0.5, l4 = 0.15, l5 = 0.12, l6 = 0.1;
  std::vector<double> radii{0.12, 0.1, 0.06, 0.05, 0.05};  // links 1,2,4,5,6
  double boom_side = 0.12;
  double boom_length = 1.0;
};

class StanfordArm : public Manipulator {
 public:
  StanfordArm(StanfordParams params, Pose base, JointLimits limits,
              Vec3 gravity = Vec3(0, 0, -9.81));

  int dof() const override { return 6; }
  std::string name() const override { return "stanford"; }
  MatX mass_matrix(const VecX& q) const override;
  MatX coriolis(const VecX& q, const VecX& qd) const override;
  VecX coriolis_vector(const VecX& q, const VecX& qd) const override;
  VecX gravity_vec(const VecX& q) const override;
  Mat6X jacobian(const VecX& q) const override;
  Pose forward_kin(const VecX& q) const override;
  VecX inverse_kin(const Pose& target, const VecX& hint) const override;

  const StanfordParams& params() const { return params_; }

 private:
  StanfordParams params_;
  SerialChain chain_;
  Vec3 gravity_base_;
};

}  // namespace cotopt

#endif  // COTOPT_MANIPULATOR_HPP_
