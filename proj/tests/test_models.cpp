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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "cotopt/manipulator.hpp"
#include "cotopt/rigid_object.hpp"
#include "cotopt/scenario.hpp"

using namespace cotopt;

namespace {

JointLimits default_limits(int n) {
  JointLimits limits;
  limits.torque_upper = VecX::Constant(n, 100.0);
  limits.torque_lower = VecX::Constant(n, -100.0);
  limits.velocity = VecX::Constant(n, 3.0);
  return limits;
}

PlanarArm make_planar3r() {
  return PlanarArm({0.5, 0.4, 0.2}, {4.0, 3.0, 1.5}, Pose{}, default_limits(3));
}

StanfordArm make_stanford() { return StanfordArm(StanfordParams{}, Pose{}, default_limits(6)); }

VecX random_q(int n, std::mt19937& rng, double range = 1.2) {
  std::uniform_real_distribution<double> dist(-range, range);
  VecX q(n);
  for (int i = 0; i < n; ++i) q[i] = dist(rng);
  return q;
}

// Keeps the Stanford boom extended so configurations stay generic.
VecX random_stanford_q(std::mt19937& rng) {
  VecX q = random_q(6, rng);
  q[2] = 0.8 + 0.5 * std::abs(q[2]);
  return q;
}

}  // namespace

TEST_CASE("object dynamics terms: gravity and zero angular velocity") {
  RigidObjectModel obj;
  obj.mass = 10.0;
  obj.inertia_body = Mat3::Identity();
  const auto terms = eval_object_dynamics_terms(obj, Pose{}, Vec3::Zero());
  Vec6 expected_g;
  expected_g << 0, 0, 98.1, 0, 0, 0;
  CHECK((terms.g - expected_g).norm() < 1e-12);
  CHECK(terms.C.norm() == 0.0);
  CHECK((terms.M.topLeftCorner<3, 3>() - 10.0 * Mat3::Identity()).norm() < 1e-12);
}

TEST_CASE("object inertia rotates into the inertial frame") {
  RigidObjectModel obj;
  obj.mass = 1.0;
  obj.inertia_body = Vec3(1.0, 2.0, 3.0).asDiagonal();
  Pose pose;
  pose.rotation = rot_z(M_PI / 2.0);
  const auto terms = eval_object_dynamics_terms(obj, pose, Vec3::Zero());
  const Mat3 inertia = terms.M.bottomRightCorner<3, 3>();
  CHECK((inertia - Mat3(Vec3(2.0, 1.0, 3.0).asDiagonal())).norm() < 1e-12);
}

TEST_CASE("object dynamics rejects a non-orthonormal rotation") {
  RigidObjectModel obj;
  Pose pose;
  pose.rotation(0, 0) = 2.0;
  CHECK_THROWS_AS(eval_object_dynamics_terms(obj, pose, Vec3::Zero()), ModelError);
}

TEST_CASE("cuboid inertia closed form and Monte Carlo cross-check") {
  const Mat3 inertia = cuboid_inertia(10.0, Vec3(0.07, 0.07, 0.4));
  CHECK(inertia(0, 0) == doctest::Approx(0.1374075).epsilon(1e-12));
  CHECK(inertia(1, 1) == doctest::Approx(0.1374075).epsilon(1e-12));
  CHECK(inertia(2, 2) == doctest::Approx(0.0081666667).epsilon(1e-6));

  // Volume integral by uniform sampling.
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> ux(-0.035, 0.035), uz(-0.2, 0.2);
  const int samples = 200000;
  double ixx = 0.0, izz = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = ux(rng), y = ux(rng), z = uz(rng);
    ixx += y * y + z * z;
    izz += x * x + y * y;
  }
  ixx *= 10.0 / samples;
  izz *= 10.0 / samples;
  CHECK(inertia(0, 0) == doctest::Approx(ixx).epsilon(0.02));
  CHECK(inertia(2, 2) == doctest::Approx(izz).epsilon(0.02));
}

TEST_CASE("builtin stanford parameters match the published table") {
  StanfordParams params;
  CHECK(params.masses == std::vector<double>{15.0, 10.0, 8.0, 1.0, 0.7, 0.5});
  CHECK(params.l1 == 0.6);
  CHECK(params.l2 == 0.5);
  CHECK(params.l4 == 0.15);
  CHECK(params.l5 == 0.12);
  CHECK(params.l6 == 0.1);
  CHECK(params.radii == std::vector<double>{0.12, 0.1, 0.06, 0.05, 0.05});
  CHECK(params.boom_side == 0.12);
}

TEST_CASE("mass matrices are symmetric positive definite") {
  std::mt19937 rng(31);
  const PlanarArm planar = make_planar3r();
  const StanfordArm stanford = make_stanford();
  for (int trial = 0; trial < 1000; ++trial) {
    const VecX q3 = random_q(3, rng, 2.5);
    const MatX m3 = planar.mass_matrix(q3);
    CHECK((m3 - m3.transpose()).norm() < 1e-10);
    Eigen::SelfAdjointEigenSolver<MatX> eig3(m3);
    CHECK(eig3.eigenvalues().minCoeff() > 0.0);

    const VecX q6 = random_stanford_q(rng);
    const MatX m6 = stanford.mass_matrix(q6);
    CHECK((m6 - m6.transpose()).norm() < 1e-9);
    Eigen::SelfAdjointEigenSolver<MatX> eig6(m6);
    CHECK(eig6.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("Christoffel Coriolis satisfies the skew-symmetry identity") {
  // d/dt M - 2C must be skew-symmetric when C comes from the Christoffel
  // symbols; Mdot is taken by finite differences along a trajectory.
  const PlanarArm arm = make_planar3r();
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const VecX q = random_q(3, rng, 2.0);
    const VecX qd = random_q(3, rng, 1.5);
    const MatX c = arm.coriolis(q, qd);

    const double h = 1e-3;
    // Five-point stencil in time along q(t) = q + t qd.
    const auto mass_at = [&](double t) { return arm.mass_matrix(q + t * qd); };
    const MatX mdot =
        (-mass_at(2.0 * h) + 8.0 * mass_at(h) - 8.0 * mass_at(-h) + mass_at(-2.0 * h)) /
        (12.0 * h);

    const MatX n = mdot - 2.0 * c;
    CHECK((n + n.transpose()).norm() < 1e-8);
  }
}

TEST_CASE("Coriolis matrix times velocity equals the inverse-dynamics vector") {
  const StanfordArm arm = make_stanford();
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const VecX q = random_stanford_q(rng);
    const VecX qd = random_q(6, rng);
    const VecX via_matrix = arm.coriolis(q, qd) * qd;
    const VecX via_rne = arm.coriolis_vector(q, qd);
    CHECK((via_matrix - via_rne).norm() < 1e-6 * std::max(1.0, via_rne.norm()));
  }
}

TEST_CASE("Jacobians match finite differences of forward kinematics") {
  std::mt19937 rng(41);
  const PlanarArm planar = make_planar3r();
  const StanfordArm stanford = make_stanford();
  const double h = 1e-6;

  const auto check_jacobian = [&](const Manipulator& robot, const VecX& q, const VecX& qd) {
    const Mat6X jac = robot.jacobian(q);
    const Pose plus = robot.forward_kin(q + h * qd);
    const Pose minus = robot.forward_kin(q - h * qd);
    const Vec3 v_fd = (plus.position - minus.position) / (2.0 * h);
    const Mat3 omega_hat =
        (plus.rotation - minus.rotation) / (2.0 * h) * robot.forward_kin(q).rotation.transpose();
    const Vec3 w_fd(omega_hat(2, 1), omega_hat(0, 2), omega_hat(1, 0));

    const Vec6 twist = jac * qd;
    CHECK((twist.head<3>() - v_fd).norm() < 1e-6);
    CHECK((twist.tail<3>() - w_fd).norm() < 1e-6);
  };

  for (int trial = 0; trial < 100; ++trial) {
    check_jacobian(planar, random_q(3, rng, 2.0), random_q(3, rng));
    check_jacobian(stanford, random_stanford_q(rng), random_q(6, rng));
  }
}

TEST_CASE("rail carriage dynamics and kinematics") {
  JointLimits limits;
  limits.torque_upper = VecX::Constant(1, 10.0);
  limits.torque_lower = VecX::Constant(1, -10.0);
  limits.velocity = VecX::Constant(1, 100.0);
  RailCarriage rail(1.0, Pose{}, limits);

  CHECK(rail.mass_matrix(VecX::Zero(1))(0, 0) == 1.0);
  CHECK(rail.gravity_vec(VecX::Zero(1))[0] == 0.0);  // rail axis is horizontal
  VecX q(1);
  q[0] = 0.3;
  CHECK((rail.forward_kin(q).position - Vec3(0.3, 0, 0)).norm() < 1e-15);

  Pose target;
  target.position = Vec3(0.5, 0.0, 0.0);
  CHECK(rail.inverse_kin(target, VecX::Zero(1))[0] == doctest::Approx(0.5));
  target.position = Vec3(0.5, 0.2, 0.0);  // off the rail
  CHECK_THROWS_AS(rail.inverse_kin(target, VecX::Zero(1)), KinematicsError);
}

TEST_CASE("planar 2R inverse kinematics forced geometry") {
  PlanarArm arm({1.0, 1.0}, {1.0, 1.0}, Pose{}, default_limits(2));
  // Target (1, 1) in the arm plane (world x-z): u = 1, v = 1 -> world (1, 0, -1).
  Pose target;
  target.position = Vec3(1.0, 0.0, -1.0);
  VecX hint(2);
  hint << 0.0, 1.0;  // elbow-down side
  const VecX q = arm.inverse_kin(target, hint);
  CHECK(q[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(q[1] == doctest::Approx(M_PI / 2.0).epsilon(1e-9));

  Pose unreachable;
  unreachable.position = Vec3(2.5, 0.0, 0.0);
  CHECK_THROWS_AS(arm.inverse_kin(unreachable, hint), KinematicsError);
}

TEST_CASE("inverse kinematics round-trips through forward kinematics") {
  std::mt19937 rng(59);
  const PlanarArm planar = make_planar3r();
  const StanfordArm stanford = make_stanford();
  std::uniform_real_distribution<double> noise(-0.2, 0.2);

  for (int trial = 0; trial < 200; ++trial) {
    {
      const VecX q = random_q(3, rng, 1.4);
      const Pose target = planar.forward_kin(q);
      VecX hint = q;
      for (int i = 0; i < 3; ++i) hint[i] += noise(rng);
      const VecX solved = planar.inverse_kin(target, hint);
      const Pose reached = planar.forward_kin(solved);
      CHECK((reached.position - target.position).norm() < 1e-8);
      CHECK((reached.rotation - target.rotation).norm() < 1e-8);
    }
    {
      const VecX q = random_stanford_q(rng);
      const Pose target = stanford.forward_kin(q);
      VecX hint = q;
      for (int i = 0; i < 6; ++i) hint[i] += noise(rng);
      const VecX solved = stanford.inverse_kin(target, hint);
      const Pose reached = stanford.forward_kin(solved);
      CHECK((reached.position - target.position).norm() < 1e-8);
      CHECK((reached.rotation - target.rotation).norm() < 1e-8);
    }
  }
}

TEST_CASE("joint limit validation") {
  JointLimits bad;
  bad.torque_upper = VecX::Constant(1, -1.0);
  bad.torque_lower = VecX::Constant(1, 1.0);
  bad.velocity = VecX::Constant(1, 1.0);
  CHECK_THROWS_AS(RailCarriage(1.0, Pose{}, bad), ModelError);

  JointLimits bad_vel;
  bad_vel.torque_upper = VecX::Constant(1, 1.0);
  bad_vel.torque_lower = VecX::Constant(1, -1.0);
  bad_vel.velocity = VecX::Constant(1, 0.0);
  CHECK_THROWS_AS(RailCarriage(1.0, Pose{}, bad_vel), ModelError);
}
