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

#include "cotopt/object_path.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cotopt {

Pose ObjectPath::pose(double s) const {
  const PathSample ps = sample(s);
  return {ps.p, rotation_zyz(ps.phi)};
}

AnalyticPath::AnalyticPath(std::string name, Fn p, Fn dp, Fn ddp, Fn phi, Fn dphi, Fn ddphi)
    : name_(std::move(name)),
      p_(std::move(p)),
      dp_(std::move(dp)),
      ddp_(std::move(ddp)),
      phi_(std::move(phi)),
      dphi_(std::move(dphi)),
      ddphi_(std::move(ddphi)) {}

PathSample AnalyticPath::sample(double s) const {
  if (s < -1e-12 || s > 1.0 + 1e-12) {
    throw KinematicsError("path coordinate s = " + std::to_string(s) + " outside [0, 1]");
  }
  return {p_(s), dp_(s), ddp_(s), phi_(s), dphi_(s), ddphi_(s)};
}

namespace {

std::shared_ptr<const ObjectPath> make_p1() {
  return std::make_shared<AnalyticPath>(
      "P.1",
      [](double s) { return Vec3(-0.3 + 1.2 * s, std::sin(s - 0.4), 0.4 + 0.6 * s); },
      [](double s) { return Vec3(1.2, std::cos(s - 0.4), 0.6); },
      [](double s) { return Vec3(0.0, -std::sin(s - 0.4), 0.0); },
      [](double s) { return Vec3(-0.5 * s + 0.2, 0.5 * std::sin(s), -0.4); },
      [](double s) { return Vec3(-0.5, 0.5 * std::cos(s), 0.0); },
      [](double s) { return Vec3(0.0, -0.5 * std::sin(s), 0.0); });
}

std::shared_ptr<const ObjectPath> make_p2() {
  return std::make_shared<AnalyticPath>(
      "P.2",
      [](double s) { return Vec3(std::sin(s), std::cos(s) - 0.5, 0.3 + 0.7 * s); },
      [](double s) { return Vec3(std::cos(s), -std::sin(s), 0.7); },
      [](double s) { return Vec3(-std::sin(s), -std::cos(s), 0.0); },
      [](double s) { return Vec3(0.5 * s, -0.5 * s, 0.0); },
      [](double) { return Vec3(0.5, -0.5, 0.0); },
      [](double) { return Vec3::Zero(); });
}

std::shared_ptr<const ObjectPath> make_p3() {
  return std::make_shared<AnalyticPath>(
      "P.3",
      [](double s) { return Vec3(s * s, std::cos(s) - 0.5, 0.7 + s * (s - 1.0)); },
      [](double s) { return Vec3(2.0 * s, -std::sin(s), 2.0 * s - 1.0); },
      [](double s) { return Vec3(2.0, -std::cos(s), 2.0); },
      [](double s) { return Vec3(0.5 * s, 0.3 * s, -0.2 * s); },
      [](double) { return Vec3(0.5, 0.3, -0.2); },
      [](double) { return Vec3::Zero(); });
}

std::shared_ptr<const ObjectPath> make_p4() {
  return std::make_shared<AnalyticPath>(
      "P.4",
      [](double s) { return Vec3(s * s - 0.3, 0.5 * s * s * s, 1.2 * (1.0 - s) + 0.4); },
      [](double s) { return Vec3(2.0 * s, 1.5 * s * s, -1.2); },
      [](double s) { return Vec3(2.0, 3.0 * s, 0.0); },
      [](double s) { return Vec3(0.5 * std::sin(s), -0.3 * s, 0.3 * s); },
      [](double s) { return Vec3(0.5 * std::cos(s), -0.3, 0.3); },
      [](double s) { return Vec3(-0.5 * std::sin(s), 0.0, 0.0); });
}

std::shared_ptr<const ObjectPath> make_p5() {
  return std::make_shared<AnalyticPath>(
      "P.5",
      [](double s) { return Vec3(-0.5 + s, 0.4 * s * s * s, 1.2 * (1.0 - s) + 0.4); },
      [](double s) { return Vec3(1.0, 1.2 * s * s, -1.2); },
      [](double s) { return Vec3(0.0, 2.4 * s, 0.0); },
      [](double s) { return Vec3(0.5 * std::cos(s), 0.5, 0.3 * s); },
      [](double s) { return Vec3(-0.5 * std::sin(s), 0.0, 0.3); },
      [](double s) { return Vec3(-0.5 * std::cos(s), 0.0, 0.0); });
}

// Straight line along x used by the pointmass-rail scenario.
std::shared_ptr<const ObjectPath> make_rail_line() {
  return std::make_shared<AnalyticPath>(
      "rail-line", [](double s) { return Vec3(s, 0.0, 0.0); },
      [](double) { return Vec3(1.0, 0.0, 0.0); }, [](double) { return Vec3::Zero(); },
      [](double) { return Vec3::Zero(); }, [](double) { return Vec3::Zero(); },
      [](double) { return Vec3::Zero(); });
}

// In-plane translation plus pitch for the planar dual-arm scenario. The
// constant theta = pi/2 keeps the ZYZ triple away from its singularity while
// the object rotates about the world y axis through psi(s).
std::shared_ptr<const ObjectPath> make_planar_arc() {
  return std::make_shared<AnalyticPath>(
      "planar-arc",
      [](double s) {
        return Vec3(0.15 * (2.0 * s - 1.0), 0.0, 0.55 + 0.08 * std::sin(M_PI * s));
      },
      [](double s) { return Vec3(0.3, 0.0, 0.08 * M_PI * std::cos(M_PI * s)); },
      [](double s) { return Vec3(0.0, 0.0, -0.08 * M_PI * M_PI * std::sin(M_PI * s)); },
      [](double s) { return Vec3(M_PI / 2.0, M_PI / 2.0, -M_PI / 2.0 + 0.25 * (s - 0.5)); },
      [](double) { return Vec3(0.0, 0.0, 0.25); }, [](double) { return Vec3::Zero(); });
}

}  // namespace

std::shared_ptr<const ObjectPath> catalog_path(const std::string& name) {
  if (name == "P.1") return make_p1();
  if (name == "P.2") return make_p2();
  if (name == "P.3") return make_p3();
  if (name == "P.4") return make_p4();
  if (name == "P.5") return make_p5();
  if (name == "rail-line") return make_rail_line();
  if (name == "planar-arc") return make_planar_arc();
  throw ConfigError("unknown path '" + name + "'; catalog: P.1..P.5, rail-line, planar-arc");
}

std::vector<std::string> catalog_path_names() {
  return {"P.1", "P.2", "P.3", "P.4", "P.5", "rail-line", "planar-arc"};
}

namespace {

/// Natural cubic spline through (x_i, y_i) with strictly increasing x.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const int n = static_cast<int>(x_.size());
    if (n < 3) throw ConfigError("CSV path needs at least 3 samples");
    // Solve the tridiagonal system for second derivatives (natural ends).
    std::vector<double> h(n - 1);
    for (int i = 0; i < n - 1; ++i) {
      h[i] = x_[i + 1] - x_[i];
      if (h[i] <= 0.0) throw ConfigError("CSV path s column must be strictly increasing");
    }
    std::vector<double> diag(n, 2.0), upper(n, 0.0), rhs(n, 0.0);
    std::vector<double> m(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
      diag[i] = 2.0 * (h[i - 1] + h[i]);
      upper[i] = h[i];
      rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
    }
    // Thomas algorithm on the interior unknowns, m[0] = m[n-1] = 0.
    std::vector<double> cp(n, 0.0), dp(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
      const double lower = h[i - 1];
      const double denom = diag[i] - lower * cp[i - 1];
      cp[i] = upper[i] / denom;
      dp[i] = (rhs[i] - lower * dp[i - 1]) / denom;
    }
    for (int i = n - 2; i >= 1; --i) m[i] = dp[i] - cp[i] * m[i + 1];
    m2_ = std::move(m);
  }

  void eval(double x, double& y, double& dy, double& ddy) const {
    const int n = static_cast<int>(x_.size());
    int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    i = std::clamp(i, 0, n - 2);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    y = a * y_[i] + b * y_[i + 1] +
        ((a * a * a - a) * m2_[i] + (b * b * b - b) * m2_[i + 1]) * h * h / 6.0;
    dy = (y_[i + 1] - y_[i]) / h +
         ((3.0 * b * b - 1.0) * m2_[i + 1] - (3.0 * a * a - 1.0) * m2_[i]) * h / 6.0;
    ddy = a * m2_[i] + b * m2_[i + 1];
  }

 private:
  std::vector<double> x_, y_;
  std::vector<double> m2_;
};

class SplinePath : public ObjectPath {
 public:
  SplinePath(std::string name, std::vector<double> s, std::vector<std::vector<double>> cols)
      : name_(std::move(name)) {
    for (int c = 0; c < 6; ++c) splines_[c] = CubicSpline(s, cols[static_cast<size_t>(c)]);
  }

  PathSample sample(double s) const override {
    if (s < -1e-12 || s > 1.0 + 1e-12) {
      throw KinematicsError("path coordinate s = " + std::to_string(s) + " outside [0, 1]");
    }
    PathSample ps;
    double vals[6], d1[6], d2[6];
    for (int c = 0; c < 6; ++c) splines_[c].eval(s, vals[c], d1[c], d2[c]);
    ps.p = Vec3(vals[0], vals[1], vals[2]);
    ps.dp = Vec3(d1[0], d1[1], d1[2]);
    ps.ddp = Vec3(d2[0], d2[1], d2[2]);
    ps.phi = Vec3(vals[3], vals[4], vals[5]);
    ps.dphi = Vec3(d1[3], d1[4], d1[5]);
    ps.ddphi = Vec3(d2[3], d2[4], d2[5]);
    return ps;
  }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  CubicSpline splines_[6];
};

}  // namespace

std::shared_ptr<const ObjectPath> parse_csv_path(std::istream& in, const std::string& name) {
  std::vector<double> s;
  std::vector<std::vector<double>> cols(6);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    // Skip a header row if the first field is not numeric.
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double v;
    if (!(ls >> v)) continue;
    s.push_back(v);
    for (int c = 0; c < 6; ++c) {
      if (!(ls >> v)) throw ConfigError("CSV path row with fewer than 7 columns: " + line);
      cols[static_cast<size_t>(c)].push_back(v);
    }
  }
  if (s.size() < 3) throw ConfigError("CSV path '" + name + "' has fewer than 3 usable rows");
  if (std::abs(s.front()) > 1e-9 || std::abs(s.back() - 1.0) > 1e-9) {
    throw ConfigError("CSV path s column must span [0, 1]");
  }
  return std::make_shared<SplinePath>(name, s, cols);
}

std::shared_ptr<const ObjectPath> load_csv_path(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw ConfigError("cannot open path file '" + filename + "'");
  return parse_csv_path(in, filename);
}

PathGrid::PathGrid(int intervals) : intervals_(intervals) {
  if (intervals < 2) throw ConfigError("path grid needs at least 2 intervals");
}

}  // namespace cotopt
