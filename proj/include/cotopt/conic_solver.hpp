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

#ifndef COTOPT_CONIC_SOLVER_HPP_
#define COTOPT_CONIC_SOLVER_HPP_

#include <functional>
#include <string>

#include "cotopt/conic_program.hpp"

namespace cotopt {

enum class SolveStatus { optimal, infeasible, unbounded, max_iter, numerical_failure };

const char* status_name(SolveStatus s);

struct SolverSettings {
  double feastol = 1e-8;
  double abstol = 1e-8;
  double reltol = 1e-8;
  int max_iter = 200;
  int refine_iters = 4;
  double static_regularization = 7e-8;
  bool equilibrate = true;
  bool verbose = false;
  std::string backend = "interior-point";
};

struct SolveReport {
  SolveStatus status = SolveStatus::numerical_failure;
  VecX primal;     // program variables
  VecX eq_duals;   // equality multipliers
  VecX cone_duals; // slack duals in standard-form row order
  double objective = 0.0;
  int iterations = 0;
  double wall_time_s = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  std::string message;
};

/// Solves the program with the backend named in settings. Deterministic for
/// identical inputs and settings. Throws SolverError on structural defects or
/// an unknown backend.
SolveReport solve(const ConicProgram& program, const SolverSettings& settings = {});

using SolveBackend = std::function<SolveReport(const ConicProgram&, const SolverSettings&)>;
void register_backend(const std::string& name, SolveBackend backend);
std::vector<std::string> backend_names();

}  // namespace cotopt

#endif  // COTOPT_CONIC_SOLVER_HPP_
