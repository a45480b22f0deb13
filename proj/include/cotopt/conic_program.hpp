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

#ifndef COTOPT_CONIC_PROGRAM_HPP_
#define COTOPT_CONIC_PROGRAM_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "cotopt/common.hpp"

namespace cotopt {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Linear objective over linear equalities, variable bounds, and second-order
/// cones. Every variable belongs to exactly one declaration: a box bound
/// (possibly one-sided or free) or membership in a variable second-order cone
/// (t, y...) with t >= ||y||. Cones over affine expressions F x + f are kept
/// as separate blocks.
struct ConicProgram {
  int num_vars = 0;
  VecX objective;

  std::vector<Triplet> eq_triplets;
  VecX eq_rhs;

  VecX lower, upper;  // +-inf for absent bounds
  std::vector<char> in_var_cone;  // bookkeeping: variable claimed by a SOC declaration

  struct VarSoc {
    std::vector<int> indices;  // (t, y_1, ..., y_d)
  };
  std::vector<VarSoc> var_socs;

  struct AffineSoc {
    int dim = 0;                   // rows of F
    std::vector<Triplet> rows;     // F
    VecX offset;                   // f
    std::string label;
  };
  std::vector<AffineSoc> affine_socs;

  std::vector<std::string> var_names;

  // -- builder helpers ------------------------------------------------------
  int add_var(const std::string& name, double lb, double ub);
  int add_free_var(const std::string& name);
  int add_nonneg_var(const std::string& name);
  void add_var_soc(const std::vector<int>& indices);
  void add_eq(int row, int col, double value);
  int num_eq_rows() const { return static_cast<int>(eq_rhs.size()); }
};

/// Structural defects (empty iff the program invariants hold).
std::vector<std::string> validate(const ConicProgram& p);

/// Self-describing sparse text dump, round-trippable with read_program.
void write_program(std::ostream& out, const ConicProgram& p);
ConicProgram read_program(std::istream& in);
void write_program_file(const std::string& filename, const ConicProgram& p);
ConicProgram read_program_file(const std::string& filename);

}  // namespace cotopt

#endif  // COTOPT_CONIC_PROGRAM_HPP_
