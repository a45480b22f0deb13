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

#include "cotopt/grasp.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace cotopt {

int ContactModel::wrench_dim() const {
  switch (kind) {
    case ContactKind::rigid: return 6;
    case ContactKind::point_planar: return 2;
    case ContactKind::point3d: return 3;
    case ContactKind::soft_finger: return 4;
  }
  return 0;
}

int ContactModel::effective_tangent_axis() const {
  return tangent_axis >= 0 ? tangent_axis : (normal_axis + 1) % 3;
}

MatX ContactModel::wrench_basis() const {
  const int m = wrench_dim();
  MatX b = MatX::Zero(6, m);
  switch (kind) {
    case ContactKind::rigid:
      b = MatX::Identity(6, 6);
      break;
    case ContactKind::point_planar:
      b(normal_axis, 0) = 1.0;
      b(effective_tangent_axis(), 1) = 1.0;
      break;
    case ContactKind::point3d:
      b.topRows<3>() = Mat3::Identity();
      break;
    case ContactKind::soft_finger:
      b.topRows<3>() = Mat3::Identity();
      b(3 + normal_axis, 3) = 1.0;
      break;
  }
  return b;
}

void ContactModel::validate() const {
  if (normal_axis < 0 || normal_axis > 2) throw ModelError("contact normal axis must be 0..2");
  if (kind != ContactKind::rigid) {
    if (mu <= 0.0) throw ModelError("contact friction coefficient mu must be positive");
    if (delta1 < 0.0 || delta2 < 0.0) throw ModelError("contact margins must be nonnegative");
  }
  if (kind == ContactKind::soft_finger && gamma <= 0.0) {
    throw ModelError("soft-finger torsional coefficient gamma must be positive");
  }
  if (kind == ContactKind::point_planar && effective_tangent_axis() == normal_axis) {
    throw ModelError("planar contact tangent axis must differ from the normal axis");
  }
  if (!is_rotation(frame_in_object)) throw ModelError("contact frame is not a rotation");
}

Mat3 contact_frame_from_normal(const Vec3& inward_normal, int normal_axis) {
  const double norm = inward_normal.norm();
  if (norm < 1e-12) throw ModelError("contact normal must be nonzero");
  const Vec3 n = inward_normal / norm;
  // Complete with the coordinate axis least aligned with n.
  int seed = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(n[i]) < std::abs(n[seed])) seed = i;
  }
  Vec3 t1 = Vec3::Unit(seed) - n * n[seed];
  t1.normalize();
  const Vec3 t2 = n.cross(t1);

  Mat3 frame;
  frame.col(normal_axis) = n;
  frame.col((normal_axis + 1) % 3) = t1;
  frame.col((normal_axis + 2) % 3) = t2;
  if (frame.determinant() < 0.0) frame.col((normal_axis + 2) % 3) = -t2;
  return frame;
}

Mat6 object_to_agent_jacobian(const Vec3& p_io) {
  Mat6 j = Mat6::Identity();
  j.topRightCorner<3, 3>() = -skew(p_io);
  return j;
}

Mat6 grasp_matrix_block(const Vec3& p_io) {
  return object_to_agent_jacobian(p_io).transpose();
}

ConeCheck cone_membership(const VecX& f, const ContactModel& contact, bool interior) {
  if (f.size() != contact.wrench_dim()) {
    throw ModelError("cone_membership: wrench has dimension " + std::to_string(f.size()) +
                     ", contact expects " + std::to_string(contact.wrench_dim()));
  }
  const double d1 = interior ? contact.delta1 : 0.0;
  const double d2 = interior ? contact.delta2 : 0.0;

  ConeCheck check;
  switch (contact.kind) {
    case ContactKind::rigid: {
      check.member = true;
      check.residuals = VecX::Zero(0);
      return check;
    }
    case ContactKind::point_planar: {
      const double fn = f[0], ft = f[1];
      check.residuals = VecX(2);
      check.residuals[0] = contact.mu * fn - d1 - std::abs(ft);
      check.residuals[1] = fn;
      break;
    }
    case ContactKind::point3d: {
      const double fn = f[contact.normal_axis];
      double tang2 = 0.0;
      for (int i = 0; i < 3; ++i) {
        if (i != contact.normal_axis) tang2 += f[i] * f[i];
      }
      check.residuals = VecX(2);
      check.residuals[0] = contact.mu * fn - d1 - std::sqrt(tang2);
      check.residuals[1] = fn;
      break;
    }
    case ContactKind::soft_finger: {
      const double fn = f[contact.normal_axis];
      double tang2 = 0.0;
      for (int i = 0; i < 3; ++i) {
        if (i != contact.normal_axis) tang2 += f[i] * f[i];
      }
      const double torsion = f[3];
      check.residuals = VecX(3);
      check.residuals[0] = contact.mu * fn - d1 - std::sqrt(tang2);
      check.residuals[1] = fn;
      check.residuals[2] = contact.gamma * fn - d2 - std::abs(torsion);
      break;
    }
  }
  check.member = (check.residuals.minCoeff() >= 0.0);
  return check;
}

bool force_closure_two_contacts(const Vec3& p1, const Vec3& inward_normal1, double mu1,
                                const Vec3& p2, const Vec3& inward_normal2, double mu2) {
  const Vec3 line = p2 - p1;
  const double len = line.norm();
  if (len < 1e-12) throw ModelError("force closure test: coincident contact points");
  if (mu1 <= 0.0 || mu2 <= 0.0) throw ModelError("force closure test: mu must be positive");

  const auto inside = [len](const Vec3& dir, const Vec3& normal, double mu) {
    const double c = dir.dot(normal.normalized()) / len;
    return std::acos(std::clamp(c, -1.0, 1.0)) <= std::atan(mu) + 1e-12;
  };
  return inside(line, inward_normal1, mu1) && inside(-line, inward_normal2, mu2);
}

double nullspace_residual(const std::vector<Vec6>& h, const std::vector<Mat6>& g_blocks) {
  if (h.size() != g_blocks.size()) {
    throw ModelError("nullspace_residual: wrench/grasp block count mismatch");
  }
  Vec6 sum = Vec6::Zero();
  for (size_t i = 0; i < h.size(); ++i) sum += g_blocks[i] * h[i];
  return sum.norm();
}

GraspAtPose grasp_at_pose(const std::vector<ContactModel>& contacts, const Pose& object_pose) {
  GraspAtPose grasp;
  const size_t n = contacts.size();
  grasp.g_blocks.reserve(n);
  grasp.contact_frames.reserve(n);
  grasp.g_bar_blocks.reserve(n);

  int total_m = 0;
  for (const ContactModel& c : contacts) total_m += c.wrench_dim();
  grasp.grasp_matrix.resize(6, static_cast<int>(6 * n));
  grasp.grasp_map.resize(6, total_m);

  int col6 = 0, colm = 0;
  for (const ContactModel& contact : contacts) {
    const Vec3 p_io = object_pose.rotation * contact.attach_in_object;
    const Mat6 g = grasp_matrix_block(p_io);
    const Mat3 frame = object_pose.rotation * contact.frame_in_object;
    Mat6 rr = Mat6::Zero();
    rr.topLeftCorner<3, 3>() = frame;
    rr.bottomRightCorner<3, 3>() = frame;
    const MatX g_bar = g * rr * contact.wrench_basis();

    grasp.g_blocks.push_back(g);
    grasp.contact_frames.push_back(frame);
    grasp.g_bar_blocks.push_back(g_bar);
    grasp.grasp_matrix.block<6, 6>(0, col6) = g;
    grasp.grasp_map.block(0, colm, 6, g_bar.cols()) = g_bar;
    col6 += 6;
    colm += static_cast<int>(g_bar.cols());
  }
  return grasp;
}

double min_singular_value(const MatX& m) {
  Eigen::JacobiSVD<MatX> svd(m);
  return svd.singularValues().minCoeff();
}

}  // namespace cotopt
