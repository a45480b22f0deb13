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

#ifndef COTOPT_GRASP_HPP_
#define COTOPT_GRASP_HPP_

#include <vector>

#include "cotopt/geometry.hpp"

namespace cotopt {

enum class ContactKind { rigid, point_planar, point3d, soft_finger };

/// Contact between an end-effector and the object. The frame is fixed in the
/// object; `normal_axis` names which frame axis points along the inward
/// surface normal. Wrench coordinates f keep the axis ordering of the frame:
///   rigid        f = full 6-wrench (no cone)
///   point_planar f = (f_normal, f_tangent), m = 2
///   point3d      f = (f_x, f_y, f_z), m = 3
///   soft_finger  f = (f_x, f_y, f_z, t_normal), m = 4
struct ContactModel {
  ContactKind kind = ContactKind::rigid;
  int normal_axis = 2;        // 0 = x, 1 = y, 2 = z
  int tangent_axis = -1;      // planar contacts only; default: next axis cyclically
  double mu = 1.0;            // Coulomb friction coefficient
  double gamma = 1.0;         // torsional coefficient (soft finger)
  double delta1 = 0.0;        // force-cone interior margin (N)
  double delta2 = 0.0;        // torsion interior margin (N m)
  Vec3 attach_in_object = Vec3::Zero();
  Mat3 frame_in_object = Mat3::Identity();

  int wrench_dim() const;
  /// Wrench basis B in contact-frame coordinates, 6 x wrench_dim().
  MatX wrench_basis() const;
  int effective_tangent_axis() const;
  void validate() const;
};

/// Builds a right-handed frame whose `normal_axis` column equals the inward
/// normal `n` (object frame), remaining axes chosen deterministically.
Mat3 contact_frame_from_normal(const Vec3& inward_normal, int normal_axis);

/// J_Oi for a COM-to-contact offset p: [[I, -S(p)], [0, I]].
Mat6 object_to_agent_jacobian(const Vec3& p_io);
/// G_i = J_Oi^T: maps a contact wrench to the object wrench at the COM.
Mat6 grasp_matrix_block(const Vec3& p_io);

struct ConeCheck {
  bool member = false;
  VecX residuals;  // >= 0 componentwise iff member
};

/// Friction cone membership of a contact-frame wrench vector f. With
/// `interior`, the margins delta1/delta2 are applied.
ConeCheck cone_membership(const VecX& f, const ContactModel& contact, bool interior);

/// Two-contact force-closure test: the line between the contact points must
/// lie inside both friction cones (angle to each inward normal <= atan(mu)).
bool force_closure_two_contacts(const Vec3& p1, const Vec3& inward_normal1, double mu1,
                                const Vec3& p2, const Vec3& inward_normal2, double mu2);

/// || sum_i G_i h_i || for stacked world-frame wrenches; audit of internal
/// forces lying in the nullspace of the grasp matrix.
double nullspace_residual(const std::vector<Vec6>& h, const std::vector<Mat6>& g_blocks);

/// Grasp geometry at one object pose.
struct GraspAtPose {
  std::vector<Mat6> g_blocks;        // G_i, world frame
  std::vector<Mat3> contact_frames;  // R_Ci, world frame
  std::vector<MatX> g_bar_blocks;    // G_i * blockdiag(R,R) * B_i, 6 x m_i
  MatX grasp_matrix;                 // [G_1 ... G_N], 6 x 6N
  MatX grasp_map;                    // [Gbar_1 ... Gbar_N], 6 x m
};

GraspAtPose grasp_at_pose(const std::vector<ContactModel>& contacts, const Pose& object_pose);

double min_singular_value(const MatX& m);

}  // namespace cotopt

#endif  // COTOPT_GRASP_HPP_
