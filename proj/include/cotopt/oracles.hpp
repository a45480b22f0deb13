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

#ifndef COTOPT_ORACLES_HPP_
#define COTOPT_ORACLES_HPP_

#include <set>
#include <string>

#include "cotopt/transcription.hpp"

namespace cotopt {

/// Minimum time for a point mass driven over distance L by a symmetric force
/// bound: T = 2 sqrt(L m / F).
double bang_bang_pointmass_time(double distance, double total_mass, double total_force);

/// 1-DOF reduction for the dynamic-programming cross-check:
/// tau = m(s) a + c(s) b + g(s), tau in [tau_lower, tau_upper], b <= b_bar(s).
struct DpOracle1Dof {
  std::function<void(double s, double& m, double& c, double& g)> coefs;
  double tau_lower = -1.0;
  double tau_upper = 1.0;
  std::function<double(double)> b_bar;  // may return +inf
  double sdot0 = 0.0;
  double sdotT = 0.0;
};

/// Backward value iteration over an (s, sdot^2) grid with ns s-intervals and
/// nb velocity-squared levels up to b_max. Throws InfeasibleError when the
/// start or goal cell is unreachable.
double dp_velocity_profile_time(const DpOracle1Dof& problem, int ns, int nb, double b_max);

struct AuditCheck {
  std::string family;     // constraint family ("manipulator-dynamics", ...)
  std::string detail;     // worst offender (node, robot, ...)
  double reference = 0.0;
  double actual = 0.0;
  double error = 0.0;     // scaled residual compared against tolerance
  double tolerance = 0.0;
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  std::set<std::string> families;
  bool all_pass = true;
};

/// Re-evaluates every constraint family of the solved program with
/// coefficients recomputed from the models (not the cached assembly) and
/// cone membership via the grasp-module predicates.
AuditReport constraint_audit(const TrajectorySolution& solution, const BuiltProgram& built,
                             const std::vector<const Manipulator*>& robots,
                             const RigidObjectModel& object, const ObjectPath& path,
                             const SampledJointPath& sampled);

void write_audit_csv(const std::string& filename, const AuditReport& report);
std::string format_audit_summary(const AuditReport& report);

}  // namespace cotopt

#endif  // COTOPT_ORACLES_HPP_
