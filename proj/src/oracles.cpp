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

#include "cotopt/oracles.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace cotopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double bang_bang_pointmass_time(double distance, double total_mass, double total_force) {
  if (distance <= 0.0 || total_mass <= 0.0 || total_force <= 0.0) {
    throw ModelError("bang-bang oracle requires positive distance, mass and force");
  }
  return 2.0 * std::sqrt(distance * total_mass / total_force);
}

double dp_velocity_profile_time(const DpOracle1Dof& problem, int ns, int nb, double b_max) {
  if (ns < 2 || nb < 2 || b_max <= 0.0) {
    throw ModelError("DP oracle needs ns >= 2, nb >= 2, b_max > 0");
  }
  const double ds = 1.0 / ns;
  const double db = b_max / nb;

  const auto level = [&](double b) {
    return static_cast<int>(std::lround(b / db));
  };
  const int j_start = level(problem.sdot0 * problem.sdot0);
  const int j_goal = level(problem.sdotT * problem.sdotT);
  if (j_start < 0 || j_start > nb || j_goal < 0 || j_goal > nb) {
    throw InfeasibleError("DP oracle: boundary velocity outside the (s, sdot^2) grid");
  }

  std::vector<double> value(static_cast<size_t>(nb + 1), kInf);
  value[static_cast<size_t>(j_goal)] = 0.0;

  std::vector<double> next = value;
  for (int k = ns - 1; k >= 0; --k) {
    const double s = k * ds;
    const double s_next = (k + 1) * ds;
    double m, c, g;
    problem.coefs(s, m, c, g);
    const double cap_here = problem.b_bar ? problem.b_bar(s) : kInf;
    const double cap_next = problem.b_bar ? problem.b_bar(s_next) : kInf;

    std::vector<double> current(static_cast<size_t>(nb + 1), kInf);
    for (int j = 0; j <= nb; ++j) {
      const double b = j * db;
      if (b > cap_here + 1e-12) continue;

      // Feasible acceleration interval from the torque bounds.
      const double lo_rhs = problem.tau_lower - c * b - g;
      const double hi_rhs = problem.tau_upper - c * b - g;
      double a_lo, a_hi;
      if (std::abs(m) > 1e-12) {
        a_lo = lo_rhs / m;
        a_hi = hi_rhs / m;
        if (a_lo > a_hi) std::swap(a_lo, a_hi);
      } else {
        if (lo_rhs > 1e-9 || hi_rhs < -1e-9) continue;  // statically infeasible
        a_lo = -kInf;
        a_hi = kInf;
      }

      double b_next_lo = std::max(0.0, b + 2.0 * ds * a_lo);
      double b_next_hi = std::min({b_max, cap_next, b + 2.0 * ds * a_hi});
      if (b_next_lo > b_next_hi + 1e-12) continue;

      const int j_lo = std::max(0, static_cast<int>(std::ceil(b_next_lo / db - 1e-9)));
      const int j_hi = std::min(nb, static_cast<int>(std::floor(b_next_hi / db + 1e-9)));
      const double sqrt_b = std::sqrt(b);
      for (int jn = j_lo; jn <= j_hi; ++jn) {
        if (next[static_cast<size_t>(jn)] == kInf) continue;
        const double denom = sqrt_b + std::sqrt(jn * db);
        if (denom < 1e-12) continue;
        const double cost = 2.0 * ds / denom + next[static_cast<size_t>(jn)];
        if (cost < current[static_cast<size_t>(j)]) current[static_cast<size_t>(j)] = cost;
      }
    }
    next = std::move(current);
  }

  const double result = next[static_cast<size_t>(j_start)];
  if (result == kInf) {
    throw InfeasibleError("DP oracle: start cell cannot reach the goal cell");
  }
  return result;
}

// ---------------------------------------------------------------------------
// Constraint audit

namespace {

struct FamilyWorst {
  double error = 0.0;
  std::string detail;
  double reference = 0.0;
  double actual = 0.0;
};

void track(FamilyWorst& worst, double error, const std::string& detail, double reference,
           double actual) {
  if (error >= worst.error) {
    worst.error = error;
    worst.detail = detail;
    worst.reference = reference;
    worst.actual = actual;
  }
}

// Analytic d/ds of the ZYZ rate transform along the path (independent of the
// finite-difference evaluation used during assembly).
Mat3 euler_rate_transform_derivative(const Vec3& phi, const Vec3& dphi) {
  const double cphi = std::cos(phi[0]), sphi = std::sin(phi[0]);
  const double cth = std::cos(phi[1]), sth = std::sin(phi[1]);
  Mat3 d_phi, d_theta;
  d_phi << 0, -cphi, -sphi * sth,
           0, -sphi, cphi * sth,
           0, 0, 0;
  d_theta << 0, 0, cphi * cth,
             0, 0, sphi * cth,
             0, 0, -sth;
  return d_phi * dphi[0] + d_theta * dphi[1];
}

}  // namespace

AuditReport constraint_audit(const TrajectorySolution& solution, const BuiltProgram& built,
                             const std::vector<const Manipulator*>& robots,
                             const RigidObjectModel& object, const ObjectPath& path,
                             const SampledJointPath& sampled) {
  AuditReport report;
  const int K = built.K;
  const PathGrid grid(K);
  const double delta_s = grid.delta();

  const auto push = [&report](const std::string& family, const FamilyWorst& worst,
                              double tolerance) {
    AuditCheck check;
    check.family = family;
    check.detail = worst.detail;
    check.reference = worst.reference;
    check.actual = worst.actual;
    check.error = worst.error;
    check.tolerance = tolerance;
    check.pass = worst.error <= tolerance;
    report.checks.push_back(check);
    report.families.insert(family);
    report.all_pass = report.all_pass && check.pass;
  };

  // Manipulator dynamics, with the Coriolis term from inverse dynamics rather
  // than the Christoffel matrix used during assembly.
  FamilyWorst manip;
  for (size_t i = 0; i < robots.size(); ++i) {
    const Manipulator& robot = *robots[i];
    for (int k = 0; k <= K; ++k) {
      const VecX q = sampled.q[i].col(k);
      const VecX dq = sampled.dq[i].col(k);
      const VecX ddq = sampled.ddq[i].col(k);
      const MatX mass = robot.mass_matrix(q);
      const VecX m_coef = mass * dq;
      const VecX c_coef = mass * ddq + robot.coriolis_vector(q, dq);
      const VecX g_coef = robot.gravity_vec(q);
      const Mat6X jac = robot.jacobian(q);

      Vec6 h_i = Vec6::Zero();
      if (!solution.h_contact.empty()) h_i = solution.h_contact[i].col(k);
      const double a_node = solution.a[std::min(k, K - 1)];
      const VecX expected =
          m_coef * a_node + c_coef * solution.b[k] + g_coef + jac.transpose() * h_i;
      const VecX actual = solution.tau[i].col(k);
      const double scale = std::max(1.0, expected.cwiseAbs().maxCoeff());
      const double err = (actual - expected).cwiseAbs().maxCoeff() / scale;
      track(manip, err, "robot " + std::to_string(i) + " node " + std::to_string(k),
            expected.cwiseAbs().maxCoeff(), actual.cwiseAbs().maxCoeff());
    }
  }
  push("manipulator-dynamics", manip, 1e-6);

  // Object dynamics with the analytic dT/ds.
  FamilyWorst object_dyn;
  Vec6 g_o = Vec6::Zero();
  g_o.head<3>() = -object.mass * object.gravity;
  for (int k = 0; k <= K; ++k) {
    const PathSample ps = path.sample(grid.node(k));
    const Pose pose{ps.p, rotation_zyz(ps.phi)};
    const Mat3 t_ang = euler_rate_transform(ps.phi);
    const Mat3 dt_ang = euler_rate_transform_derivative(ps.phi, ps.dphi);
    const Vec3 omega_rate = t_ang * ps.dphi;
    const ObjectDynamicsTerms terms = eval_object_dynamics_terms(object, pose, omega_rate);
    Vec6 xo1, xo2;
    xo1 << ps.dp, ps.dphi;
    xo2 << ps.ddp, ps.ddphi;
    Mat6 t_pose = Mat6::Identity();
    t_pose.bottomRightCorner<3, 3>() = t_ang;
    Mat6 dt_pose = Mat6::Zero();
    dt_pose.bottomRightCorner<3, 3>() = dt_ang;
    const Vec6 m_o = terms.M * (t_pose * xo1);
    const Vec6 c_o = terms.M * (dt_pose * xo1 + t_pose * xo2) + terms.C * (t_pose * xo1);

    const double a_node = solution.a[std::min(k, K - 1)];
    const Vec6 expected = m_o * a_node + c_o * solution.b[k] + g_o;
    const Vec6 actual = solution.h_object.col(k);
    const double scale = std::max(1.0, expected.cwiseAbs().maxCoeff());
    track(object_dyn, (actual - expected).cwiseAbs().maxCoeff() / scale,
          "node " + std::to_string(k), expected.norm(), actual.norm());
  }
  push("object-dynamics", object_dyn, 1e-6);

  // Wrench sum: h_O == sum_i G_i h_i with grasp blocks rebuilt from the path.
  FamilyWorst wrench_sum;
  for (int k = 0; k <= K; ++k) {
    Vec6 total = Vec6::Zero();
    for (size_t i = 0; i < robots.size(); ++i) {
      const Vec3 p_io = coupled_offset_world(path, object, static_cast<int>(i), grid.node(k));
      total += grasp_matrix_block(p_io) * Vec6(solution.h_contact[i].col(k));
    }
    const Vec6 h_o = solution.h_object.col(k);
    const double scale = std::max(1.0, h_o.cwiseAbs().maxCoeff());
    track(wrench_sum, (total - h_o).cwiseAbs().maxCoeff() / scale, "node " + std::to_string(k),
          h_o.norm(), total.norm());
  }
  push("wrench-sum", wrench_sum, 1e-6);

  // b-progression and boundary conditions.
  FamilyWorst progression;
  for (int k = 0; k < K; ++k) {
    const double lhs = solution.b[k + 1] - solution.b[k];
    const double rhs = 2.0 * solution.a[k] * delta_s;
    const double scale = std::max(1.0, std::abs(rhs));
    track(progression, std::abs(lhs - rhs) / scale, "interval " + std::to_string(k), rhs, lhs);
  }
  push("b-progression", progression, 1e-6);

  FamilyWorst boundary;
  track(boundary, std::abs(solution.b[0] - built.sdot0 * built.sdot0), "b[0]",
        built.sdot0 * built.sdot0, solution.b[0]);
  track(boundary, std::abs(solution.b[K] - built.sdotT * built.sdotT), "b[K]",
        built.sdotT * built.sdotT, solution.b[K]);
  push("boundary-velocity", boundary, 1e-6);

  // Velocity bound translation recomputed from the joint limits.
  FamilyWorst velocity;
  for (int k = 0; k <= K; ++k) {
    double b_bar = kInf;
    for (size_t i = 0; i < robots.size(); ++i) {
      const VecX& vel = robots[i]->limits().velocity;
      for (int j = 0; j < robots[i]->dof(); ++j) {
        const double dq = sampled.dq[i](j, k);
        if (std::abs(dq) > 1e-12) b_bar = std::min(b_bar, std::pow(vel[j] / std::abs(dq), 2));
      }
    }
    const double violation =
        std::max({solution.b[k] - (std::isfinite(b_bar) ? b_bar : kInf), -solution.b[k], 0.0});
    track(velocity, std::isfinite(violation) ? violation : 0.0, "node " + std::to_string(k),
          b_bar, solution.b[k]);
  }
  push("velocity-bounds", velocity, 1e-8);

  FamilyWorst torque_bounds;
  for (size_t i = 0; i < robots.size(); ++i) {
    const JointLimits& limits = robots[i]->limits();
    for (int k = 0; k <= K; ++k) {
      for (int j = 0; j < robots[i]->dof(); ++j) {
        const double tau = solution.tau[i](j, k);
        const double scale = std::max(1.0, limits.torque_upper[j] - limits.torque_lower[j]);
        const double violation =
            std::max({tau - limits.torque_upper[j], limits.torque_lower[j] - tau, 0.0}) / scale;
        track(torque_bounds, violation,
              "robot " + std::to_string(i) + " joint " + std::to_string(j) + " node " +
                  std::to_string(k),
              limits.torque_upper[j], tau);
      }
    }
  }
  push("torque-bounds", torque_bounds, 1e-8);

  if (built.kind == ProgramKind::frictional) {
    FamilyWorst cones, interior, nullspace, positivity;
    for (int k = 0; k <= K; ++k) {
      std::vector<Vec6> h_internal;
      std::vector<Mat6> g_blocks;
      for (size_t i = 0; i < built.contacts.size(); ++i) {
        const VecX f_total = solution.f_motion[i].col(k) + solution.f_internal[i].col(k);
        const ConeCheck total_check = cone_membership(f_total, built.contacts[i], false);
        track(cones, std::max(0.0, -total_check.residuals.minCoeff()),
              "contact " + std::to_string(i) + " node " + std::to_string(k),
              total_check.residuals.minCoeff(), 0.0);

        const ConeCheck internal_check =
            cone_membership(solution.f_internal[i].col(k), built.contacts[i], true);
        track(interior, std::max(0.0, -internal_check.residuals.minCoeff()),
              "contact " + std::to_string(i) + " node " + std::to_string(k),
              internal_check.residuals.minCoeff(), 0.0);

        const int normal = built.contacts[i].kind == ContactKind::point_planar
                               ? 0
                               : built.contacts[i].normal_axis;
        track(positivity, std::max(0.0, -f_total[normal]),
              "contact " + std::to_string(i) + " node " + std::to_string(k), 0.0,
              f_total[normal]);

        h_internal.push_back(solution.h_internal[i].col(k));
        const Vec3 p_io = coupled_offset_world(path, object, static_cast<int>(i), grid.node(k));
        g_blocks.push_back(grasp_matrix_block(p_io));
      }
      track(nullspace, nullspace_residual(h_internal, g_blocks), "node " + std::to_string(k),
            0.0, nullspace_residual(h_internal, g_blocks));
    }
    push("friction-cones", cones, 1e-6);
    push("interior-cones", interior, 1e-6);
    push("normal-force-positivity", positivity, 0.0);
    push("nullspace", nullspace, 1e-6);
  }

  // Objective vs recovered traversal time (tightness of the epigraph cones).
  FamilyWorst objective;
  track(objective,
        std::abs(solution.objective - solution.total_time) / std::max(1.0, solution.total_time),
        "T", solution.total_time, solution.objective);
  push("objective-vs-time", objective, 1e-5);

  return report;
}

void write_audit_csv(const std::string& filename, const AuditReport& report) {
  std::ofstream out(filename);
  if (!out) throw Error(Stage::io, "cannot open '" + filename + "' for writing");
  out << "family,detail,reference,actual,error,tolerance,pass\n" << std::setprecision(12);
  for (const AuditCheck& check : report.checks) {
    out << check.family << "," << check.detail << "," << check.reference << "," << check.actual
        << "," << check.error << "," << check.tolerance << "," << (check.pass ? 1 : 0) << "\n";
  }
}

std::string format_audit_summary(const AuditReport& report) {
  std::ostringstream out;
  out << "constraint audit: " << (report.all_pass ? "PASS" : "FAIL") << "\n";
  for (const AuditCheck& check : report.checks) {
    out << "  " << (check.pass ? "ok  " : "FAIL") << " " << std::left << std::setw(26)
        << check.family << " err " << std::scientific << std::setprecision(2) << check.error
        << " (tol " << check.tolerance << ") at " << check.detail << "\n";
    out << std::defaultfloat;
  }
  return out.str();
}

}  // namespace cotopt
