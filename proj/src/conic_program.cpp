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

#include "cotopt/conic_program.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace cotopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void grow(VecX& v, int n, double fill) {
  const int old = static_cast<int>(v.size());
  v.conservativeResize(n);
  for (int i = old; i < n; ++i) v[i] = fill;
}
}  // namespace

int ConicProgram::add_var(const std::string& name, double lb, double ub) {
  const int idx = num_vars++;
  grow(objective, num_vars, 0.0);
  grow(lower, num_vars, -kInf);
  grow(upper, num_vars, kInf);
  lower[idx] = lb;
  upper[idx] = ub;
  in_var_cone.push_back(0);
  var_names.push_back(name);
  return idx;
}

int ConicProgram::add_free_var(const std::string& name) { return add_var(name, -kInf, kInf); }

int ConicProgram::add_nonneg_var(const std::string& name) { return add_var(name, 0.0, kInf); }

void ConicProgram::add_var_soc(const std::vector<int>& indices) {
  for (int i : indices) {
    if (i < 0 || i >= num_vars) throw ModelError("add_var_soc: variable index out of range");
    in_var_cone[static_cast<size_t>(i)] = 1;
  }
  var_socs.push_back({indices});
}

void ConicProgram::add_eq(int row, int col, double value) {
  if (row >= num_eq_rows()) grow(eq_rhs, row + 1, 0.0);
  if (value != 0.0) eq_triplets.push_back({row, col, value});
}

std::vector<std::string> validate(const ConicProgram& p) {
  std::vector<std::string> defects;
  if (p.objective.size() != p.num_vars || p.lower.size() != p.num_vars ||
      p.upper.size() != p.num_vars ||
      static_cast<int>(p.var_names.size()) != p.num_vars) {
    defects.push_back("inconsistent variable-array sizes");
    return defects;
  }

  // Each variable: exactly one declaration. A variable inside a SOC must not
  // also carry finite box bounds.
  std::vector<int> cone_of(static_cast<size_t>(p.num_vars), -1);
  for (size_t c = 0; c < p.var_socs.size(); ++c) {
    const auto& soc = p.var_socs[c];
    if (soc.indices.size() < 2) {
      defects.push_back("variable cone " + std::to_string(c) + " has dimension < 2");
    }
    for (int i : soc.indices) {
      if (i < 0 || i >= p.num_vars) {
        defects.push_back("variable cone " + std::to_string(c) + " references variable " +
                          std::to_string(i) + " out of range");
        continue;
      }
      if (cone_of[static_cast<size_t>(i)] >= 0) {
        defects.push_back("variable " + std::to_string(i) + " ('" +
                          p.var_names[static_cast<size_t>(i)] + "') belongs to cones " +
                          std::to_string(cone_of[static_cast<size_t>(i)]) + " and " +
                          std::to_string(c));
      }
      cone_of[static_cast<size_t>(i)] = static_cast<int>(c);
      if (std::isfinite(p.lower[i]) || std::isfinite(p.upper[i])) {
        defects.push_back("variable " + std::to_string(i) +
                          " has both box bounds and cone membership");
      }
    }
  }
  for (int i = 0; i < p.num_vars; ++i) {
    if (std::isfinite(p.lower[i]) && std::isfinite(p.upper[i]) && p.lower[i] >= p.upper[i]) {
      defects.push_back("variable " + std::to_string(i) + " has empty box [" +
                        std::to_string(p.lower[i]) + ", " + std::to_string(p.upper[i]) + "]");
    }
  }

  // Equality system: indices in range, no all-zero rows.
  const int rows = p.num_eq_rows();
  std::vector<char> row_nonzero(static_cast<size_t>(std::max(rows, 0)), 0);
  for (const Triplet& t : p.eq_triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= p.num_vars) {
      defects.push_back("equality triplet (" + std::to_string(t.row) + ", " +
                        std::to_string(t.col) + ") out of range");
      continue;
    }
    if (t.value != 0.0) row_nonzero[static_cast<size_t>(t.row)] = 1;
  }
  for (int r = 0; r < rows; ++r) {
    if (!row_nonzero[static_cast<size_t>(r)]) {
      defects.push_back("equality row " + std::to_string(r) + " is all-zero");
    }
  }

  for (size_t c = 0; c < p.affine_socs.size(); ++c) {
    const auto& soc = p.affine_socs[c];
    if (soc.dim < 2) defects.push_back("affine cone " + std::to_string(c) + " has dimension < 2");
    if (soc.offset.size() != soc.dim) {
      defects.push_back("affine cone " + std::to_string(c) + " offset size mismatch");
    }
    for (const Triplet& t : soc.rows) {
      if (t.row < 0 || t.row >= soc.dim || t.col < 0 || t.col >= p.num_vars) {
        defects.push_back("affine cone " + std::to_string(c) + " triplet out of range");
      }
    }
  }
  return defects;
}

namespace {
void write_value(std::ostream& out, double v) {
  if (v == kInf) {
    out << "inf";
  } else if (v == -kInf) {
    out << "-inf";
  } else {
    out << std::setprecision(17) << v;
  }
}

double read_value(std::istream& in) {
  std::string tok;
  in >> tok;
  if (tok == "inf") return kInf;
  if (tok == "-inf") return -kInf;
  return std::stod(tok);
}
}  // namespace

void write_program(std::ostream& out, const ConicProgram& p) {
  out << "cotopt-socp 1\n";
  out << "vars " << p.num_vars << "\n";
  for (int i = 0; i < p.num_vars; ++i) {
    out << "var " << i << " " << p.var_names[static_cast<size_t>(i)] << " ";
    write_value(out, p.lower[i]);
    out << " ";
    write_value(out, p.upper[i]);
    out << "\n";
  }
  out << "objective " << p.objective.size() << "\n";
  for (int i = 0; i < p.objective.size(); ++i) {
    if (p.objective[i] != 0.0) {
      out << i << " ";
      write_value(out, p.objective[i]);
      out << "\n";
    }
  }
  out << "end-objective\n";
  out << "equalities " << p.num_eq_rows() << " " << p.eq_triplets.size() << "\n";
  for (const Triplet& t : p.eq_triplets) {
    out << t.row << " " << t.col << " ";
    write_value(out, t.value);
    out << "\n";
  }
  out << "rhs\n";
  for (int r = 0; r < p.num_eq_rows(); ++r) {
    write_value(out, p.eq_rhs[r]);
    out << "\n";
  }
  out << "var-socs " << p.var_socs.size() << "\n";
  for (const auto& soc : p.var_socs) {
    out << soc.indices.size();
    for (int i : soc.indices) out << " " << i;
    out << "\n";
  }
  out << "affine-socs " << p.affine_socs.size() << "\n";
  for (const auto& soc : p.affine_socs) {
    out << "cone " << soc.dim << " " << soc.rows.size() << " "
        << (soc.label.empty() ? "-" : soc.label) << "\n";
    for (const Triplet& t : soc.rows) {
      out << t.row << " " << t.col << " ";
      write_value(out, t.value);
      out << "\n";
    }
    for (int r = 0; r < soc.dim; ++r) {
      write_value(out, soc.offset[r]);
      out << "\n";
    }
  }
  out << "end\n";
}

ConicProgram read_program(std::istream& in) {
  std::string tok;
  int version = 0;
  in >> tok >> version;
  if (tok != "cotopt-socp" || version != 1) {
    throw Error(Stage::io, "not a cotopt-socp v1 program dump");
  }
  ConicProgram p;
  int n = 0;
  in >> tok >> n;
  for (int i = 0; i < n; ++i) {
    int idx;
    std::string name;
    in >> tok >> idx >> name;
    const double lb = read_value(in);
    const double ub = read_value(in);
    p.add_var(name, lb, ub);
  }
  int obj_size = 0;
  in >> tok >> obj_size;
  while (in >> tok && tok != "end-objective") {
    const int idx = std::stoi(tok);
    p.objective[idx] = read_value(in);
  }
  int rows = 0;
  size_t nnz = 0;
  in >> tok >> rows >> nnz;
  if (rows > 0) grow(p.eq_rhs, rows, 0.0);
  for (size_t t = 0; t < nnz; ++t) {
    int r, c;
    in >> r >> c;
    p.eq_triplets.push_back({r, c, read_value(in)});
  }
  in >> tok;  // rhs
  for (int r = 0; r < rows; ++r) p.eq_rhs[r] = read_value(in);
  size_t n_var_socs = 0;
  in >> tok >> n_var_socs;
  for (size_t c = 0; c < n_var_socs; ++c) {
    size_t dim = 0;
    in >> dim;
    std::vector<int> indices(dim);
    for (auto& i : indices) in >> i;
    p.add_var_soc(indices);
  }
  size_t n_aff = 0;
  in >> tok >> n_aff;
  for (size_t c = 0; c < n_aff; ++c) {
    ConicProgram::AffineSoc soc;
    size_t rows_count = 0;
    in >> tok >> soc.dim >> rows_count >> soc.label;
    if (soc.label == "-") soc.label.clear();
    for (size_t t = 0; t < rows_count; ++t) {
      int r, col;
      in >> r >> col;
      soc.rows.push_back({r, col, read_value(in)});
    }
    soc.offset.resize(soc.dim);
    for (int r = 0; r < soc.dim; ++r) soc.offset[r] = read_value(in);
    p.affine_socs.push_back(std::move(soc));
  }
  return p;
}

void write_program_file(const std::string& filename, const ConicProgram& p) {
  std::ofstream out(filename);
  if (!out) throw Error(Stage::io, "cannot open '" + filename + "' for writing");
  write_program(out, p);
}

ConicProgram read_program_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw Error(Stage::io, "cannot open '" + filename + "'");
  return read_program(in);
}

}  // namespace cotopt
