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

#include "cotopt/serial_chain.hpp"

#include <cmath>

namespace cotopt {

namespace {

Pose dh_transform(const DhLink& link, double q) {
  const double theta = link.theta + (link.type == JointType::revolute ? q : 0.0);
  const double d = link.d + (link.type == JointType::prismatic ? q : 0.0);
  Pose t;
  t.rotation = rot_z(theta) * rot_x(link.alpha);
  t.position = Vec3(link.a * std::cos(theta), link.a * std::sin(theta), d);
  return t;
}

}  // namespace

std::vector<Pose> SerialChain::link_poses(const VecX& q) const {
  std::vector<Pose> poses(links_.size());
  Pose acc;
  for (size_t i = 0; i < links_.size(); ++i) {
    acc = acc * dh_transform(links_[i], q[static_cast<int>(i)]);
    poses[i] = acc;
  }
  return poses;
}

Pose SerialChain::end_effector(const VecX& q) const {
  Pose acc;
  for (size_t i = 0; i < links_.size(); ++i) {
    acc = acc * dh_transform(links_[i], q[static_cast<int>(i)]);
  }
  return acc;
}

Mat6X SerialChain::jacobian(const VecX& q) const {
  const auto poses = link_poses(q);
  const Vec3 p_ee = poses.back().position;
  Mat6X jac(6, dof());
  Pose prev;  // frame i-1, identity for the first joint
  for (int i = 0; i < dof(); ++i) {
    const Vec3 axis = prev.rotation.col(2);
    if (links_[static_cast<size_t>(i)].type == JointType::revolute) {
      jac.col(i).head<3>() = axis.cross(p_ee - prev.position);
      jac.col(i).tail<3>() = axis;
    } else {
      jac.col(i).head<3>() = axis;
      jac.col(i).tail<3>().setZero();
    }
    prev = poses[static_cast<size_t>(i)];
  }
  return jac;
}

VecX SerialChain::rne(const VecX& q, const VecX& qd, const VecX& qdd, const Vec3& gravity) const {
  const int n = dof();
  const auto poses = link_poses(q);

  std::vector<Vec3> omega(static_cast<size_t>(n));
  std::vector<Vec3> alpha(static_cast<size_t>(n));
  std::vector<Vec3> acc(static_cast<size_t>(n));       // frame-origin acceleration
  std::vector<Vec3> acc_com(static_cast<size_t>(n));
  std::vector<Vec3> axes(static_cast<size_t>(n));
  std::vector<Vec3> origins(static_cast<size_t>(n) + 1);

  Vec3 w_prev = Vec3::Zero();
  Vec3 al_prev = Vec3::Zero();
  Vec3 a_prev = -gravity;  // fictitious base acceleration stands in for gravity
  Pose prev;
  origins[0] = prev.position;

  for (int i = 0; i < n; ++i) {
    const size_t k = static_cast<size_t>(i);
    const DhLink& link = links_[k];
    const Vec3 axis = prev.rotation.col(2);
    axes[k] = axis;
    const Vec3 r = poses[k].position - prev.position;

    if (link.type == JointType::revolute) {
      omega[k] = w_prev + qd[i] * axis;
      alpha[k] = al_prev + qdd[i] * axis + qd[i] * w_prev.cross(axis);
      acc[k] = a_prev + alpha[k].cross(r) + omega[k].cross(omega[k].cross(r));
    } else {
      omega[k] = w_prev;
      alpha[k] = al_prev;
      acc[k] = a_prev + alpha[k].cross(r) + omega[k].cross(omega[k].cross(r)) +
               2.0 * qd[i] * omega[k].cross(axis) + qdd[i] * axis;
    }
    const Vec3 com_arm = poses[k].rotation * link.com;
    acc_com[k] = acc[k] + alpha[k].cross(com_arm) + omega[k].cross(omega[k].cross(com_arm));

    origins[k + 1] = poses[k].position;
    w_prev = omega[k];
    al_prev = alpha[k];
    a_prev = acc[k];
    prev = poses[k];
  }

  VecX tau(n);
  Vec3 f = Vec3::Zero();  // wrench transmitted through joint i+1
  Vec3 m = Vec3::Zero();  // moment about origin of frame i
  for (int i = n - 1; i >= 0; --i) {
    const size_t k = static_cast<size_t>(i);
    const DhLink& link = links_[k];
    const Mat3 inertia_w = poses[k].rotation * link.inertia * poses[k].rotation.transpose();
    const Vec3 force = link.mass * acc_com[k];
    const Vec3 torque = inertia_w * alpha[k] + omega[k].cross(inertia_w * omega[k]);
    const Vec3 com_w = poses[k].position + poses[k].rotation * link.com;

    // Shift the distal moment from origin i to origin i-1 and add this link.
    const Vec3 r = origins[k + 1] - origins[k];
    const Vec3 m_new = m + r.cross(f) + (com_w - origins[k]).cross(force) + torque;
    const Vec3 f_new = f + force;

    tau[i] = (link.type == JointType::revolute) ? axes[k].dot(m_new) : axes[k].dot(f_new);
    f = f_new;
    m = m_new;
  }
  return tau;
}

MatX SerialChain::mass_matrix(const VecX& q) const {
  const int n = dof();
  MatX mass(n, n);
  const VecX zero = VecX::Zero(n);
  for (int j = 0; j < n; ++j) {
    VecX e = VecX::Zero(n);
    e[j] = 1.0;
    mass.col(j) = rne(q, zero, e, Vec3::Zero());
  }
  // Symmetrize away accumulation noise.
  mass = 0.5 * (mass + mass.transpose()).eval();
  return mass;
}

VecX SerialChain::gravity_vec(const VecX& q, const Vec3& gravity) const {
  const VecX zero = VecX::Zero(dof());
  return rne(q, zero, zero, gravity);
}

VecX SerialChain::coriolis_vector(const VecX& q, const VecX& qd) const {
  return rne(q, qd, VecX::Zero(dof()), Vec3::Zero());
}

MatX SerialChain::coriolis_matrix(const VecX& q, const VecX& qd, double step) const {
  const int n = dof();
  std::vector<MatX> dm(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    VecX qp = q, qm = q;
    qp[k] += step;
    qm[k] -= step;
    dm[static_cast<size_t>(k)] = (mass_matrix(qp) - mass_matrix(qm)) / (2.0 * step);
  }
  MatX c = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        sum += 0.5 *
               (dm[static_cast<size_t>(k)](i, j) + dm[static_cast<size_t>(j)](i, k) -
                dm[static_cast<size_t>(i)](j, k)) *
               qd[k];
      }
      c(i, j) = sum;
    }
  }
  return c;
}

}  // namespace cotopt
