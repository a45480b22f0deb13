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
//
// Reference second-order cone solver: primal-dual interior-point method with
// Nesterov-Todd scaling on the homogeneous self-dual embedding, in the
// tradition of ECOS (Domahidi, Chu, Boyd 2013).

#include "cotopt/conic_solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>

namespace cotopt {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using SpMat = Eigen::SparseMatrix<double>;

// ---------------------------------------------------------------------------
// Standard-form conversion:  min c'x  s.t.  A x = b,  G x + s = h,
// s in R+^{n_lp} x Q_{d1} x ... x Q_{dk}. Presolve removes fixed variables
// and empty equality rows.

struct StdForm {
  int n = 0;  // kept variables
  SpMat A, G, At, Gt;
  VecX b, h, c;
  int n_lp = 0;
  std::vector<int> soc_dims;

  std::vector<int> keep;          // kept variable -> original index
  VecX fixed_values;              // original size; NaN for kept variables
  std::vector<int> eq_row_map;    // kept eq row -> original row
  double objective_constant = 0.0;
  bool trivially_infeasible = false;
  std::string presolve_message;
};

StdForm to_standard_form(const ConicProgram& p) {
  StdForm sf;
  std::vector<char> in_cone(static_cast<size_t>(p.num_vars), 0);
  for (const auto& soc : p.var_socs) {
    for (int i : soc.indices) in_cone[static_cast<size_t>(i)] = 1;
  }

  sf.fixed_values = VecX::Constant(p.num_vars, std::numeric_limits<double>::quiet_NaN());
  std::vector<int> new_index(static_cast<size_t>(p.num_vars), -1);
  for (int i = 0; i < p.num_vars; ++i) {
    const bool fixed = !in_cone[static_cast<size_t>(i)] && std::isfinite(p.lower[i]) &&
                       p.lower[i] == p.upper[i];
    if (fixed) {
      sf.fixed_values[i] = p.lower[i];
      sf.objective_constant += p.objective[i] * p.lower[i];
    } else {
      new_index[static_cast<size_t>(i)] = static_cast<int>(sf.keep.size());
      sf.keep.push_back(i);
    }
  }
  sf.n = static_cast<int>(sf.keep.size());

  // Equalities: substitute fixed variables, drop empty rows.
  const int rows = p.num_eq_rows();
  VecX rhs = p.eq_rhs;
  std::vector<std::vector<Eigen::Triplet<double>>> row_entries(static_cast<size_t>(rows));
  for (const Triplet& t : p.eq_triplets) {
    const int ni = new_index[static_cast<size_t>(t.col)];
    if (ni < 0) {
      rhs[t.row] -= t.value * sf.fixed_values[t.col];
    } else if (t.value != 0.0) {
      row_entries[static_cast<size_t>(t.row)].push_back({t.row, ni, t.value});
    }
  }
  std::vector<Eigen::Triplet<double>> a_trips;
  std::vector<double> b_vals;
  for (int r = 0; r < rows; ++r) {
    if (row_entries[static_cast<size_t>(r)].empty()) {
      if (std::abs(rhs[r]) > 1e-12) {
        sf.trivially_infeasible = true;
        sf.presolve_message = "equality row " + std::to_string(r) +
                              " reduced to 0 = " + std::to_string(rhs[r]);
        return sf;
      }
      continue;  // empty row dropped
    }
    const int nr = static_cast<int>(b_vals.size());
    for (const auto& t : row_entries[static_cast<size_t>(r)]) {
      a_trips.emplace_back(nr, t.col(), t.value());
    }
    b_vals.push_back(rhs[r]);
    sf.eq_row_map.push_back(r);
  }
  const int p_rows = static_cast<int>(b_vals.size());
  sf.A.resize(p_rows, sf.n);
  sf.A.setFromTriplets(a_trips.begin(), a_trips.end());
  sf.b = Eigen::Map<VecX>(b_vals.data(), p_rows);

  // Inequality rows: bounds first (the LP cone), then SOC blocks.
  std::vector<Eigen::Triplet<double>> g_trips;
  std::vector<double> h_vals;
  for (int ki = 0; ki < sf.n; ++ki) {
    const int i = sf.keep[static_cast<size_t>(ki)];
    if (in_cone[static_cast<size_t>(i)]) continue;
    if (std::isfinite(p.lower[i])) {
      g_trips.emplace_back(static_cast<int>(h_vals.size()), ki, -1.0);
      h_vals.push_back(-p.lower[i]);
    }
    if (std::isfinite(p.upper[i])) {
      g_trips.emplace_back(static_cast<int>(h_vals.size()), ki, 1.0);
      h_vals.push_back(p.upper[i]);
    }
  }
  if (h_vals.empty() && p.var_socs.empty() && p.affine_socs.empty()) {
    // Keep the cone machinery alive with one trivial slack.
    h_vals.push_back(1.0);
  }
  sf.n_lp = static_cast<int>(h_vals.size());

  for (const auto& soc : p.var_socs) {
    const int base = static_cast<int>(h_vals.size());
    for (size_t r = 0; r < soc.indices.size(); ++r) {
      g_trips.emplace_back(base + static_cast<int>(r),
                           new_index[static_cast<size_t>(soc.indices[r])], -1.0);
      h_vals.push_back(0.0);
    }
    sf.soc_dims.push_back(static_cast<int>(soc.indices.size()));
  }
  for (const auto& soc : p.affine_socs) {
    const int base = static_cast<int>(h_vals.size());
    for (int r = 0; r < soc.dim; ++r) h_vals.push_back(soc.offset[r]);
    for (const Triplet& t : soc.rows) {
      const int ni = new_index[static_cast<size_t>(t.col)];
      if (ni < 0) {
        h_vals[static_cast<size_t>(base + t.row)] += t.value * sf.fixed_values[t.col];
      } else if (t.value != 0.0) {
        g_trips.emplace_back(base + t.row, ni, -t.value);
      }
    }
    sf.soc_dims.push_back(soc.dim);
  }
  const int m_rows = static_cast<int>(h_vals.size());
  sf.G.resize(m_rows, sf.n);
  sf.G.setFromTriplets(g_trips.begin(), g_trips.end());
  sf.h = Eigen::Map<VecX>(h_vals.data(), m_rows);

  sf.c.resize(sf.n);
  for (int ki = 0; ki < sf.n; ++ki) sf.c[ki] = p.objective[sf.keep[static_cast<size_t>(ki)]];

  sf.A.makeCompressed();
  sf.G.makeCompressed();
  sf.At = sf.A.transpose();
  sf.Gt = sf.G.transpose();
  return sf;
}

// ---------------------------------------------------------------------------
// Interior-point engine.

struct LpScaling {
  VecX v;  // s ./ z
  VecX w;  // sqrt(v)
};

struct SocScaling {
  int dim = 0;
  int offset = 0;
  double eta = 1.0;
  double eta2 = 1.0;
  double a = 1.0;  // first entry of the normalized NT point
  VecX q;          // tail of the normalized NT point
  MatX w2;         // dense eta^2 (2 wbar wbar' - J)
};

class InteriorPoint {
 public:
  InteriorPoint(StdForm sf, const SolverSettings& settings)
      : sf_(std::move(sf)), st_(settings) {}

  SolveReport run();

 private:
  void equilibrate();
  void setup_kkt();
  void reset_scalings();
  bool update_scalings();
  void update_kkt_scalings();
  void scale(const VecX& z, VecX& out) const;        // out = W z
  void w2_multiply_add(const VecX& x, VecX& y) const;  // y += W^2 x
  int solve_kkt(const VecX& rhs, VecX& dx, VecX& dy, VecX& dz, bool initialize);
  void bring_to_cone(const VecX& r, VecX& s) const;
  double conic_product(const VecX& u, const VecX& v, VecX& out) const;
  void conic_division(const VecX& u, const VecX& w, VecX& out) const;
  double line_search(const VecX& lambda, const VecX& ds, const VecX& dz, double tau, double dtau,
                     double kap, double dkap) const;
  void compute_residuals();
  void update_statistics();
  int check_exit(bool reduced) const;  // -1: keep going, else status code

  StdForm sf_;
  SolverSettings st_;

  int n_ = 0, p_ = 0, m_ = 0;
  VecX x_equil_, a_equil_, g_equil_;

  LpScaling lp_;
  std::vector<SocScaling> socs_;

  SpMat kkt_;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt_;
  std::vector<int> lp_slots_;
  std::vector<std::vector<int>> soc_slots_;  // lower-triangle slots, row-major

  // Iterate.
  VecX x_, y_, z_, s_, lambda_;
  double tau_ = 1.0, kap_ = 1.0;

  // Residuals and statistics.
  VecX rx_, ry_, rz_;
  double rt_ = 0.0, hresx_ = 0.0, hresy_ = 0.0, hresz_ = 0.0;
  double cx_ = 0.0, by_ = 0.0, hz_ = 0.0;
  double nx_ = 0.0, ny_ = 0.0, nz_ = 0.0, ns_ = 0.0;
  double resx0_ = 1.0, resy0_ = 1.0, resz0_ = 1.0;
  double gap_ = 0.0, mu_ = 0.0, kapovert_ = 0.0, pcost_ = 0.0, dcost_ = 0.0;
  double relgap_ = std::numeric_limits<double>::quiet_NaN();
  double pres_ = 0.0, dres_ = 0.0;
  double pinfres_ = std::numeric_limits<double>::quiet_NaN();
  double dinfres_ = std::numeric_limits<double>::quiet_NaN();
  double step_ = 0.0, sigma_ = 0.0;
  int iter_ = 0;

  struct Snapshot {
    VecX x, y, z, s;
    double tau, kap, gap, mu, kapovert, pcost, dcost, relgap, pres, dres, pinfres, dinfres;
    double cx, by, hz;
    int iter;
    bool valid = false;
  } best_;

  void save_best();
  void restore_best();
  bool better_than_best() const;
};

void InteriorPoint::equilibrate() {
  x_equil_ = VecX::Ones(n_);
  a_equil_ = VecX::Ones(p_);
  g_equil_ = VecX::Ones(m_);
  if (!st_.equilibrate) return;

  const auto sqrt_or_one = [](double v) { return v < 1e-6 ? 1.0 : std::sqrt(v); };
  for (int sweep = 0; sweep < 3; ++sweep) {
    VecX col_max = VecX::Zero(n_);
    VecX arow_max = VecX::Zero(p_);
    VecX grow_max = VecX::Zero(m_);
    for (int c = 0; c < n_; ++c) {
      for (SpMat::InnerIterator it(sf_.A, c); it; ++it) {
        const double v = std::abs(it.value());
        col_max[c] = std::max(col_max[c], v);
        arow_max[it.row()] = std::max(arow_max[it.row()], v);
      }
      for (SpMat::InnerIterator it(sf_.G, c); it; ++it) {
        const double v = std::abs(it.value());
        col_max[c] = std::max(col_max[c], v);
        grow_max[it.row()] = std::max(grow_max[it.row()], v);
      }
    }
    // SOC rows share one uniform scale.
    int offset = sf_.n_lp;
    for (int d : sf_.soc_dims) {
      const double block = grow_max.segment(offset, d).maxCoeff();
      grow_max.segment(offset, d).setConstant(block);
      offset += d;
    }
    const VecX col_s = col_max.unaryExpr(sqrt_or_one);
    const VecX arow_s = arow_max.unaryExpr(sqrt_or_one);
    const VecX grow_s = grow_max.unaryExpr(sqrt_or_one);
    for (int c = 0; c < n_; ++c) {
      for (SpMat::InnerIterator it(sf_.A, c); it; ++it) {
        it.valueRef() /= arow_s[it.row()] * col_s[c];
      }
      for (SpMat::InnerIterator it(sf_.G, c); it; ++it) {
        it.valueRef() /= grow_s[it.row()] * col_s[c];
      }
    }
    x_equil_ = x_equil_.cwiseProduct(col_s);
    a_equil_ = a_equil_.cwiseProduct(arow_s);
    g_equil_ = g_equil_.cwiseProduct(grow_s);
  }
  sf_.c = sf_.c.cwiseQuotient(x_equil_);
  sf_.b = sf_.b.cwiseQuotient(a_equil_);
  sf_.h = sf_.h.cwiseQuotient(g_equil_);
  sf_.At = sf_.A.transpose();
  sf_.Gt = sf_.G.transpose();
}

void InteriorPoint::setup_kkt() {
  const double d = st_.static_regularization;
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < n_; ++i) trips.emplace_back(i, i, d);
  for (int c = 0; c < n_; ++c) {
    for (SpMat::InnerIterator it(sf_.A, c); it; ++it) {
      trips.emplace_back(n_ + static_cast<int>(it.row()), c, it.value());
    }
  }
  for (int r = 0; r < p_; ++r) trips.emplace_back(n_ + r, n_ + r, -d);
  for (int c = 0; c < n_; ++c) {
    for (SpMat::InnerIterator it(sf_.G, c); it; ++it) {
      trips.emplace_back(n_ + p_ + static_cast<int>(it.row()), c, it.value());
    }
  }
  const int zoff = n_ + p_;
  for (int i = 0; i < sf_.n_lp; ++i) trips.emplace_back(zoff + i, zoff + i, -1.0 - d);
  int offset = sf_.n_lp;
  for (int dim : sf_.soc_dims) {
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c <= r; ++c) {
        trips.emplace_back(zoff + offset + r, zoff + offset + c, r == c ? -1.0 - d : 0.0);
      }
    }
    offset += dim;
  }
  const int dim_kkt = n_ + p_ + m_;
  kkt_.resize(dim_kkt, dim_kkt);
  kkt_.setFromTriplets(trips.begin(), trips.end());
  kkt_.makeCompressed();

  const auto slot_of = [this](int r, int c) {
    for (int idx = kkt_.outerIndexPtr()[c]; idx < kkt_.outerIndexPtr()[c + 1]; ++idx) {
      if (kkt_.innerIndexPtr()[idx] == r) return idx;
    }
    throw SolverError("internal: missing KKT slot");
  };
  lp_slots_.resize(static_cast<size_t>(sf_.n_lp));
  for (int i = 0; i < sf_.n_lp; ++i) lp_slots_[static_cast<size_t>(i)] = slot_of(zoff + i, zoff + i);
  soc_slots_.clear();
  offset = sf_.n_lp;
  for (int dim : sf_.soc_dims) {
    std::vector<int> slots;
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c <= r; ++c) slots.push_back(slot_of(zoff + offset + r, zoff + offset + c));
    }
    soc_slots_.push_back(std::move(slots));
    offset += dim;
  }

  ldlt_.analyzePattern(kkt_);
}

void InteriorPoint::reset_scalings() {
  lp_.v = VecX::Ones(sf_.n_lp);
  lp_.w = VecX::Ones(sf_.n_lp);
  socs_.clear();
  int offset = sf_.n_lp;
  for (int dim : sf_.soc_dims) {
    SocScaling s;
    s.dim = dim;
    s.offset = offset;
    s.q = VecX::Zero(dim - 1);
    s.w2 = MatX::Identity(dim, dim);
    socs_.push_back(std::move(s));
    offset += dim;
  }
}

bool InteriorPoint::update_scalings() {
  for (int i = 0; i < sf_.n_lp; ++i) {
    if (s_[i] <= 0.0 || z_[i] <= 0.0) return false;
    lp_.v[i] = s_[i] / z_[i];
    lp_.w[i] = std::sqrt(lp_.v[i]);
  }
  for (SocScaling& sc : socs_) {
    const auto s0 = s_[sc.offset];
    const auto z0 = z_[sc.offset];
    const auto s1 = s_.segment(sc.offset + 1, sc.dim - 1);
    const auto z1 = z_.segment(sc.offset + 1, sc.dim - 1);
    const double sres = s0 * s0 - s1.squaredNorm();
    const double zres = z0 * z0 - z1.squaredNorm();
    if (sres <= 0.0 || zres <= 0.0) return false;
    const double snorm = std::sqrt(sres);
    const double znorm = std::sqrt(zres);
    const VecX sbar = s_.segment(sc.offset, sc.dim) / snorm;
    const VecX zbar = z_.segment(sc.offset, sc.dim) / znorm;
    sc.eta2 = snorm / znorm;
    sc.eta = std::sqrt(sc.eta2);
    const double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
    sc.a = (0.5 / gamma) * (sbar[0] + zbar[0]);
    sc.q = (0.5 / gamma) * (sbar.tail(sc.dim - 1) - zbar.tail(sc.dim - 1));

    // W^2 = eta^2 (2 wbar wbar' - J) with wbar = (a, q).
    VecX wbar(sc.dim);
    wbar[0] = sc.a;
    wbar.tail(sc.dim - 1) = sc.q;
    sc.w2 = 2.0 * sc.eta2 * (wbar * wbar.transpose());
    sc.w2(0, 0) -= sc.eta2;
    for (int i = 1; i < sc.dim; ++i) sc.w2(i, i) += sc.eta2;
  }
  scale(z_, lambda_);
  return true;
}

void InteriorPoint::update_kkt_scalings() {
  double* values = kkt_.valuePtr();
  const double d = st_.static_regularization;
  for (int i = 0; i < sf_.n_lp; ++i) values[lp_slots_[static_cast<size_t>(i)]] = -lp_.v[i] - d;
  for (size_t c = 0; c < socs_.size(); ++c) {
    const SocScaling& sc = socs_[c];
    size_t k = 0;
    for (int r = 0; r < sc.dim; ++r) {
      for (int col = 0; col <= r; ++col, ++k) {
        values[soc_slots_[c][k]] = -sc.w2(r, col) - (r == col ? d : 0.0);
      }
    }
  }
}

void InteriorPoint::scale(const VecX& z, VecX& out) const {
  out.resize(m_);
  out.head(sf_.n_lp) = lp_.w.cwiseProduct(z.head(sf_.n_lp));
  for (const SocScaling& sc : socs_) {
    const double z0 = z[sc.offset];
    const auto z1 = z.segment(sc.offset + 1, sc.dim - 1);
    const double zeta = sc.q.dot(z1);
    out[sc.offset] = sc.eta * (sc.a * z0 + zeta);
    out.segment(sc.offset + 1, sc.dim - 1) = sc.eta * (z1 + (z0 + zeta / (1.0 + sc.a)) * sc.q);
  }
}

void InteriorPoint::w2_multiply_add(const VecX& x, VecX& y) const {
  y.head(sf_.n_lp) += lp_.v.cwiseProduct(x.head(sf_.n_lp));
  for (const SocScaling& sc : socs_) {
    y.segment(sc.offset, sc.dim) += sc.w2 * x.segment(sc.offset, sc.dim);
  }
}

int InteriorPoint::solve_kkt(const VecX& rhs, VecX& dx, VecX& dy, VecX& dz, bool initialize) {
  VecX sol = ldlt_.solve(rhs);
  const double threshold = (1.0 + rhs.lpNorm<Eigen::Infinity>()) * 1e-14;
  double prev_err = std::numeric_limits<double>::max();
  VecX refinement;

  int k_ref = 0;
  for (k_ref = 0; k_ref <= st_.refine_iters; ++k_ref) {
    const auto dxs = sol.head(n_);
    const auto dys = sol.segment(n_, p_);
    const auto dzs = sol.tail(m_);

    // Residual of the unregularized KKT system.
    VecX ex = rhs.head(n_) - sf_.Gt * dzs;
    if (p_ > 0) ex -= sf_.At * dys;
    VecX ey = rhs.segment(n_, p_);
    if (p_ > 0) ey -= sf_.A * dxs;
    VecX ez = rhs.tail(m_) - sf_.G * dxs;
    if (initialize) {
      ez += dzs;
    } else {
      w2_multiply_add(dzs, ez);
    }

    double err = std::max(ex.lpNorm<Eigen::Infinity>(), ez.lpNorm<Eigen::Infinity>());
    if (p_ > 0) err = std::max(err, ey.lpNorm<Eigen::Infinity>());

    if (k_ref > 0 && err > prev_err) {
      sol -= refinement;
      --k_ref;
      break;
    }
    if (k_ref == st_.refine_iters || err < threshold ||
        (k_ref > 0 && prev_err < 4.0 * err)) {
      break;
    }
    prev_err = err;
    VecX e(n_ + p_ + m_);
    e << ex, ey, ez;
    refinement = ldlt_.solve(e);
    sol += refinement;
  }
  dx = sol.head(n_);
  dy = sol.segment(n_, p_);
  dz = sol.tail(m_);
  return k_ref;
}

void InteriorPoint::bring_to_cone(const VecX& r, VecX& s) const {
  double alpha = -1.0;
  for (int i = 0; i < sf_.n_lp; ++i) {
    if (r[i] <= 0.0 && -r[i] > alpha) alpha = -r[i];
  }
  for (const SocScaling& sc : socs_) {
    const double res = r[sc.offset] - r.segment(sc.offset + 1, sc.dim - 1).norm();
    if (res <= 0.0 && -res > alpha) alpha = -res;
  }
  alpha += 1.0;
  s = r;
  s.head(sf_.n_lp).array() += alpha;
  for (const SocScaling& sc : socs_) s[sc.offset] += alpha;
}

double InteriorPoint::conic_product(const VecX& u, const VecX& v, VecX& out) const {
  out.resize(m_);
  out.head(sf_.n_lp) = u.head(sf_.n_lp).cwiseProduct(v.head(sf_.n_lp));
  double mu = out.head(sf_.n_lp).lpNorm<1>();
  for (const SocScaling& sc : socs_) {
    const auto useg = u.segment(sc.offset, sc.dim);
    const auto vseg = v.segment(sc.offset, sc.dim);
    out[sc.offset] = useg.dot(vseg);
    mu += std::abs(out[sc.offset]);
    out.segment(sc.offset + 1, sc.dim - 1) =
        u[sc.offset] * vseg.tail(sc.dim - 1) + v[sc.offset] * useg.tail(sc.dim - 1);
  }
  return mu;
}

void InteriorPoint::conic_division(const VecX& u, const VecX& w, VecX& out) const {
  out.resize(m_);
  out.head(sf_.n_lp) = w.head(sf_.n_lp).cwiseQuotient(u.head(sf_.n_lp));
  for (const SocScaling& sc : socs_) {
    const double u0 = u[sc.offset];
    const double w0 = w[sc.offset];
    const auto u1 = u.segment(sc.offset + 1, sc.dim - 1);
    const auto w1 = w.segment(sc.offset + 1, sc.dim - 1);
    const double rho = u0 * u0 - u1.squaredNorm();
    const double zeta = u1.dot(w1);
    out[sc.offset] = (u0 * w0 - zeta) / rho;
    out.segment(sc.offset + 1, sc.dim - 1) = ((zeta / u0 - w0) / rho) * u1 + w1 / u0;
  }
}

double InteriorPoint::line_search(const VecX& lambda, const VecX& ds, const VecX& dz, double tau,
                                  double dtau, double kap, double dkap) const {
  constexpr double kStepMin = 1e-6;
  constexpr double kStepMax = 0.9995;
  double alpha = 2.0;
  if (sf_.n_lp > 0) {
    double rhomin = kInf, sigmamin = kInf;
    for (int i = 0; i < sf_.n_lp; ++i) {
      rhomin = std::min(rhomin, ds[i] / lambda[i]);
      sigmamin = std::min(sigmamin, dz[i] / lambda[i]);
    }
    const double worst = std::min(rhomin, sigmamin);
    alpha = worst < 0.0 ? 1.0 / (-worst) : 1.0 / 1e-13;
  }
  if (-tau / dtau > 0.0) alpha = std::min(alpha, -tau / dtau);
  if (-kap / dkap > 0.0) alpha = std::min(alpha, -kap / dkap);

  for (const SocScaling& sc : socs_) {
    const double lk0 = lambda[sc.offset];
    const auto lk1 = lambda.segment(sc.offset + 1, sc.dim - 1);
    const double lknorm2 = lk0 * lk0 - lk1.squaredNorm();
    if (lknorm2 <= 0.0) continue;
    const double lknorm = std::sqrt(lknorm2);
    const double lk0bar = lk0 / lknorm;
    const VecX lk1bar = lk1 / lknorm;

    const auto step_bound = [&](const VecX& d) {
      const double d0 = d[sc.offset];
      const auto d1 = d.segment(sc.offset + 1, sc.dim - 1);
      const double lbar_d = lk0bar * d0 - lk1bar.dot(d1);
      const double factor = (lbar_d + d0) / (lk0bar + 1.0);
      const double rho0 = lbar_d / lknorm;
      const VecX rho1 = (d1 - factor * lk1bar) / lknorm;
      return rho1.norm() - rho0;
    };
    const double bound = std::max({0.0, step_bound(ds), step_bound(dz)});
    if (bound != 0.0) alpha = std::min(alpha, 1.0 / bound);
  }
  return std::clamp(alpha, kStepMin, kStepMax);
}

void InteriorPoint::compute_residuals() {
  rx_ = -(sf_.Gt * z_);
  if (p_ > 0) rx_ -= sf_.At * y_;
  hresx_ = rx_.norm();
  rx_ -= tau_ * sf_.c;

  if (p_ > 0) {
    ry_ = sf_.A * x_;
    hresy_ = ry_.norm();
    ry_ -= tau_ * sf_.b;
  } else {
    ry_.resize(0);
    hresy_ = 0.0;
  }

  rz_ = s_ + sf_.G * x_;
  hresz_ = rz_.norm();
  rz_ -= tau_ * sf_.h;

  cx_ = sf_.c.dot(x_);
  by_ = p_ > 0 ? sf_.b.dot(y_) : 0.0;
  hz_ = sf_.h.dot(z_);
  rt_ = kap_ + cx_ + by_ + hz_;

  nx_ = x_.norm();
  ny_ = y_.norm();
  nz_ = z_.norm();
  ns_ = s_.norm();
}

void InteriorPoint::update_statistics() {
  gap_ = s_.dot(z_);
  mu_ = (gap_ + kap_ * tau_) / (sf_.n_lp + static_cast<int>(socs_.size()) + 1);
  kapovert_ = kap_ / tau_;
  pcost_ = cx_ / tau_;
  dcost_ = -(hz_ + by_) / tau_;

  if (pcost_ < 0.0) {
    relgap_ = gap_ / (-pcost_);
  } else if (dcost_ > 0.0) {
    relgap_ = gap_ / dcost_;
  } else {
    relgap_ = std::numeric_limits<double>::quiet_NaN();
  }

  const double nry = p_ > 0 ? ry_.norm() / std::max(resy0_ + nx_, 1.0) : 0.0;
  const double nrz = rz_.norm() / std::max(resz0_ + nx_ + ns_, 1.0);
  pres_ = std::max(nry, nrz) / tau_;
  dres_ = rx_.norm() / std::max(resx0_ + ny_ + nz_, 1.0) / tau_;

  pinfres_ = std::numeric_limits<double>::quiet_NaN();
  dinfres_ = std::numeric_limits<double>::quiet_NaN();
  if ((hz_ + by_) / std::max(ny_ + nz_, 1.0) < -st_.reltol) {
    pinfres_ = hresx_ / std::max(ny_ + nz_, 1.0);
  }
  if (cx_ / std::max(nx_, 1.0) < -st_.reltol) {
    dinfres_ = std::max(hresy_ / std::max(nx_, 1.0), hresz_ / std::max(nx_ + ns_, 1.0));
  }

  if (st_.verbose) {
    std::printf("%3d  %+.3e %+.3e  %.1e %.1e %.1e  %.1e %.1e\n", iter_, pcost_, dcost_, gap_,
                pres_, dres_, kapovert_, mu_);
  }
}

int InteriorPoint::check_exit(bool reduced) const {
  const double feastol = reduced ? 1e-4 : st_.feastol;
  const double abstol = reduced ? 5e-5 : st_.abstol;
  const double reltol = reduced ? 5e-5 : st_.reltol;

  const bool relgap_ok = !std::isnan(relgap_) && relgap_ < reltol;
  if ((-cx_ > 0.0 || -by_ - hz_ >= -abstol) && (pres_ < feastol && dres_ < feastol) &&
      (gap_ < abstol || relgap_ok)) {
    return 0;  // optimal
  }
  if (!std::isnan(dinfres_) && dinfres_ < feastol && tau_ < kap_) {
    return 2;  // unbounded (dual infeasible)
  }
  if ((!std::isnan(pinfres_) && pinfres_ < feastol && tau_ < kap_) ||
      (tau_ < st_.feastol && kap_ < st_.feastol && pinfres_ < st_.feastol)) {
    return 1;  // primal infeasible
  }
  return -1;
}

void InteriorPoint::save_best() {
  best_.x = x_;
  best_.y = y_;
  best_.z = z_;
  best_.s = s_;
  best_.tau = tau_;
  best_.kap = kap_;
  best_.gap = gap_;
  best_.mu = mu_;
  best_.kapovert = kapovert_;
  best_.pcost = pcost_;
  best_.dcost = dcost_;
  best_.relgap = relgap_;
  best_.pres = pres_;
  best_.dres = dres_;
  best_.pinfres = pinfres_;
  best_.dinfres = dinfres_;
  best_.cx = cx_;
  best_.by = by_;
  best_.hz = hz_;
  best_.iter = iter_;
  best_.valid = true;
}

void InteriorPoint::restore_best() {
  if (!best_.valid) return;
  x_ = best_.x;
  y_ = best_.y;
  z_ = best_.z;
  s_ = best_.s;
  tau_ = best_.tau;
  kap_ = best_.kap;
  gap_ = best_.gap;
  mu_ = best_.mu;
  kapovert_ = best_.kapovert;
  pcost_ = best_.pcost;
  dcost_ = best_.dcost;
  relgap_ = best_.relgap;
  pres_ = best_.pres;
  dres_ = best_.dres;
  pinfres_ = best_.pinfres;
  dinfres_ = best_.dinfres;
  cx_ = best_.cx;
  by_ = best_.by;
  hz_ = best_.hz;
}

bool InteriorPoint::better_than_best() const {
  if (!best_.valid) return true;
  if (!std::isnan(pinfres_) && kapovert_ > 1.0) {
    return gap_ > 0.0 && best_.gap > 0.0 && gap_ < best_.gap && mu_ > 0.0 && mu_ < best_.mu &&
           pinfres_ > 0.0 && pinfres_ < best_.pres;
  }
  return gap_ > 0.0 && best_.gap > 0.0 && gap_ < best_.gap && pres_ > 0.0 &&
         pres_ < best_.pres && dres_ > 0.0 && dres_ < best_.dres && kapovert_ > 0.0 &&
         kapovert_ < best_.kapovert && mu_ > 0.0 && mu_ < best_.mu;
}

SolveReport InteriorPoint::run() {
  n_ = sf_.n;
  p_ = static_cast<int>(sf_.b.size());
  m_ = static_cast<int>(sf_.h.size());

  equilibrate();
  reset_scalings();
  setup_kkt();

  resx0_ = std::max(1.0, sf_.c.norm());
  resy0_ = std::max(1.0, sf_.b.norm());
  resz0_ = std::max(1.0, sf_.h.norm());

  SolveReport report;

  ldlt_.factorize(kkt_);
  if (ldlt_.info() != Eigen::Success) {
    report.status = SolveStatus::numerical_failure;
    report.message = "initial KKT factorization failed";
    return report;
  }

  VecX rhs1(n_ + p_ + m_), rhs2(n_ + p_ + m_);
  rhs1.setZero();
  rhs1.segment(n_, p_) = sf_.b;
  rhs1.tail(m_) = sf_.h;
  rhs2.setZero();
  rhs2.head(n_) = -sf_.c;

  VecX dx1(n_), dy1(p_), dz1(m_), dx2(n_), dy2(p_), dz2(m_);
  solve_kkt(rhs1, dx1, dy1, dz1, true);
  x_ = dx1;
  bring_to_cone(-dz1, s_);
  solve_kkt(rhs2, dx2, dy2, dz2, true);
  y_ = dy2;
  bring_to_cone(dz2, z_);
  lambda_.resize(m_);
  tau_ = 1.0;
  kap_ = 1.0;
  rhs1.head(n_) = -sf_.c;

  // 0: optimal, 1: infeasible, 2: unbounded, 3: maxit, 4: numerics
  int outcome = 4;
  bool reduced_accuracy = false;
  double pres_prev = std::numeric_limits<double>::max();

  VecX w_dz(m_), ds_by_w(m_), ds1(m_), ds2(m_), ds_final(m_);

  for (iter_ = 0; iter_ <= st_.max_iter; ++iter_) {
    compute_residuals();
    update_statistics();

    if (iter_ > 0 && (pres_ > 500.0 * pres_prev || gap_ < 0.0)) {
      restore_best();
      const int code = check_exit(true);
      outcome = code >= 0 ? code : 4;
      reduced_accuracy = code >= 0;
      break;
    }
    pres_prev = pres_;

    const int code = check_exit(false);
    if (code >= 0) {
      outcome = code;
      break;
    }
    if (iter_ > 0 && step_ == 1e-6 * 0.99) {
      restore_best();
      const int r = check_exit(true);
      outcome = r >= 0 ? r : 4;
      reduced_accuracy = true;
      break;
    }
    if (iter_ == st_.max_iter || std::isnan(pcost_)) {
      if (!better_than_best()) restore_best();
      const int r = check_exit(true);
      outcome = r >= 0 ? r : (std::isnan(pcost_) ? 4 : 3);
      reduced_accuracy = true;
      break;
    }

    if (iter_ == 0 || better_than_best()) save_best();

    if (!update_scalings()) {
      restore_best();
      const int r = check_exit(true);
      outcome = r >= 0 ? r : 4;
      reduced_accuracy = true;
      break;
    }
    update_kkt_scalings();
    ldlt_.factorize(kkt_);
    if (ldlt_.info() != Eigen::Success) {
      restore_best();
      outcome = 4;
      break;
    }

    solve_kkt(rhs1, dx1, dy1, dz1, false);

    // Affine (predictor) direction.
    rhs2.head(n_) = rx_;
    rhs2.segment(n_, p_) = -ry_;
    rhs2.tail(m_) = s_ - rz_;
    solve_kkt(rhs2, dx2, dy2, dz2, false);

    const double dtau_denom =
        kap_ / tau_ - sf_.c.dot(dx1) - (p_ > 0 ? sf_.b.dot(dy1) : 0.0) - sf_.h.dot(dz1);
    const double dtauaff = (rt_ - kap_ + sf_.c.dot(dx2) + (p_ > 0 ? sf_.b.dot(dy2) : 0.0) +
                            sf_.h.dot(dz2)) /
                           dtau_denom;
    dz2 += dtauaff * dz1;
    scale(dz2, w_dz);
    ds_by_w = -w_dz - lambda_;
    const double dkapaff = -kap_ - kap_ / tau_ * dtauaff;
    const double step_aff = line_search(lambda_, ds_by_w, w_dz, tau_, dtauaff, kap_, dkapaff);

    sigma_ = std::clamp(std::pow(1.0 - step_aff, 3), 1e-4, 0.9999);

    // Combined (corrector) direction.
    conic_product(lambda_, lambda_, ds1);
    conic_product(ds_by_w, w_dz, ds2);
    const double sigmamu = sigma_ * mu_;
    ds1 += ds2;
    ds1.head(sf_.n_lp).array() -= sigmamu;
    for (const SocScaling& sc : socs_) ds1[sc.offset] -= sigmamu;
    conic_division(lambda_, ds1, ds_by_w);
    scale(ds_by_w, ds1);

    const double one_minus_sigma = 1.0 - sigma_;
    rhs2.head(n_) = one_minus_sigma * rx_;
    rhs2.segment(n_, p_) = -one_minus_sigma * ry_;
    rhs2.tail(m_) = -one_minus_sigma * rz_ + ds1;
    solve_kkt(rhs2, dx2, dy2, dz2, false);

    const double bkap = kap_ * tau_ + dkapaff * dtauaff - sigmamu;
    const double dtau = (one_minus_sigma * rt_ - bkap / tau_ + sf_.c.dot(dx2) +
                         (p_ > 0 ? sf_.b.dot(dy2) : 0.0) + sf_.h.dot(dz2)) /
                        dtau_denom;
    dx2 += dtau * dx1;
    dy2 += dtau * dy1;
    dz2 += dtau * dz1;
    scale(dz2, w_dz);
    ds_by_w = -(ds_by_w + w_dz);
    const double dkap = -(bkap + kap_ * dtau) / tau_;

    step_ = 0.99 * line_search(lambda_, ds_by_w, w_dz, tau_, dtau, kap_, dkap);
    scale(ds_by_w, ds_final);

    x_ += step_ * dx2;
    y_ += step_ * dy2;
    z_ += step_ * dz2;
    s_ += step_ * ds_final;
    kap_ += step_ * dkap;
    tau_ += step_ * dtau;
  }

  // Scale back: divide by tau and undo equilibration.
  report.iterations = std::min(iter_, st_.max_iter);
  VecX x_sol = x_.cwiseQuotient(x_equil_ * tau_);
  VecX y_sol = p_ > 0 ? VecX(y_.cwiseQuotient(a_equil_ * tau_)) : VecX();
  VecX z_sol = z_.cwiseQuotient(g_equil_ * tau_);

  switch (outcome) {
    case 0:
      report.status = reduced_accuracy ? SolveStatus::numerical_failure : SolveStatus::optimal;
      report.message = reduced_accuracy ? "close to optimal (reduced accuracy only)" : "optimal";
      break;
    case 1:
      report.status = SolveStatus::infeasible;
      report.message = "primal infeasible, certificate residual " + std::to_string(pinfres_);
      break;
    case 2:
      report.status = SolveStatus::unbounded;
      report.message = "unbounded (dual infeasible), certificate residual " +
                       std::to_string(dinfres_);
      break;
    case 3:
      report.status = SolveStatus::max_iter;
      report.message = "maximum iterations reached";
      break;
    default:
      report.status = SolveStatus::numerical_failure;
      report.message = "numerical problems, best iterate returned";
      break;
  }
  report.primal = x_sol;
  report.eq_duals = y_sol;
  report.cone_duals = z_sol;
  report.primal_residual = pres_;
  report.dual_residual = dres_;
  report.gap = gap_;
  return report;
}

// ---------------------------------------------------------------------------

SolveReport interior_point_solve(const ConicProgram& program, const SolverSettings& settings) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto defects = validate(program);
  if (!defects.empty()) {
    std::string msg = "program has structural defects:";
    for (const auto& d : defects) msg += "\n  - " + d;
    throw SolverError(msg);
  }

  StdForm sf = to_standard_form(program);
  SolveReport report;
  if (sf.trivially_infeasible) {
    report.status = SolveStatus::infeasible;
    report.message = "presolve: " + sf.presolve_message;
    report.primal = VecX::Zero(program.num_vars);
    return report;
  }

  const std::vector<int> keep = sf.keep;
  const VecX fixed = sf.fixed_values;
  const std::vector<int> eq_row_map = sf.eq_row_map;
  const double obj_const = sf.objective_constant;

  if (sf.n == 0) {
    report.status = SolveStatus::optimal;
    report.message = "all variables fixed by presolve";
    report.primal = fixed;
    report.objective = obj_const;
    report.eq_duals = VecX::Zero(program.num_eq_rows());
    return report;
  }

  InteriorPoint engine(std::move(sf), settings);
  SolveReport inner = engine.run();

  // Map back to the full variable set.
  report = inner;
  report.primal = VecX::Zero(program.num_vars);
  for (int i = 0; i < program.num_vars; ++i) {
    if (!std::isnan(fixed[i])) report.primal[i] = fixed[i];
  }
  for (size_t k = 0; k < keep.size(); ++k) {
    report.primal[keep[k]] = inner.primal[static_cast<int>(k)];
  }
  report.eq_duals = VecX::Zero(program.num_eq_rows());
  for (size_t k = 0; k < eq_row_map.size(); ++k) {
    report.eq_duals[eq_row_map[k]] = inner.eq_duals[static_cast<int>(k)];
  }
  report.objective = program.objective.dot(report.primal);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::map<std::string, SolveBackend>& backend_registry() {
  static std::map<std::string, SolveBackend> registry = {
      {"interior-point", interior_point_solve}};
  return registry;
}

std::mutex& backend_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SolveReport solve(const ConicProgram& program, const SolverSettings& settings) {
  SolveBackend backend;
  {
    std::lock_guard<std::mutex> lock(backend_mutex());
    auto& registry = backend_registry();
    const auto it = registry.find(settings.backend);
    if (it == registry.end()) {
      std::string names;
      for (const auto& [name, fn] : registry) names += " " + name;
      throw SolverError("unknown solver backend '" + settings.backend + "'; available:" + names);
    }
    backend = it->second;
  }
  return backend(program, settings);
}

void register_backend(const std::string& name, SolveBackend backend) {
  std::lock_guard<std::mutex> lock(backend_mutex());
  backend_registry()[name] = std::move(backend);
}

std::vector<std::string> backend_names() {
  std::lock_guard<std::mutex> lock(backend_mutex());
  std::vector<std::string> names;
  for (const auto& [name, fn] : backend_registry()) names.push_back(name);
  return names;
}

}  // namespace cotopt
