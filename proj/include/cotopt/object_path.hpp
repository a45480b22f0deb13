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

#ifndef COTOPT_OBJECT_PATH_HPP_
#define COTOPT_OBJECT_PATH_HPP_

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cotopt/geometry.hpp"

namespace cotopt {

/// Object pose and its first two derivatives with respect to the path
/// coordinate s in [0, 1]. Orientation is a ZYZ Euler triple.
struct PathSample {
  Vec3 p, dp, ddp;
  Vec3 phi, dphi, ddphi;
};

class ObjectPath {
 public:
  virtual ~ObjectPath() = default;
  virtual PathSample sample(double s) const = 0;
  virtual std::string name() const = 0;

  Vec3 position(double s) const { return sample(s).p; }
  Vec3 orientation(double s) const { return sample(s).phi; }
  Pose pose(double s) const;
};

/// Path defined by closed-form position/orientation functions with exact
/// derivatives.
class AnalyticPath : public ObjectPath {
 public:
  using Fn = std::function<Vec3(double)>;
  AnalyticPath(std::string name, Fn p, Fn dp, Fn ddp, Fn phi, Fn dphi, Fn ddphi);
  PathSample sample(double s) const override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Fn p_, dp_, ddp_, phi_, dphi_, ddphi_;
};

/// Catalog lookup: "P.1".."P.5" plus the scenario paths "rail-line" and
/// "planar-arc". Throws ConfigError for unknown names.
std::shared_ptr<const ObjectPath> catalog_path(const std::string& name);
std::vector<std::string> catalog_path_names();

/// Dense-sample path from CSV columns (s, p_x, p_y, p_z, phi, theta, psi),
/// interpolated per column with natural cubic splines.
std::shared_ptr<const ObjectPath> load_csv_path(const std::string& filename);
std::shared_ptr<const ObjectPath> parse_csv_path(std::istream& in, const std::string& name);

/// Uniform grid s_0 = 0 < ... < s_K = 1.
class PathGrid {
 public:
  explicit PathGrid(int intervals);
  int intervals() const { return intervals_; }          // K
  int nodes() const { return intervals_ + 1; }          // K + 1
  double delta() const { return 1.0 / intervals_; }
  double node(int k) const { return static_cast<double>(k) / intervals_; }

 private:
  int intervals_;
};

}  // namespace cotopt

#endif  // COTOPT_OBJECT_PATH_HPP_
