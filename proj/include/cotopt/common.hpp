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

#ifndef COTOPT_COMMON_HPP_
#define COTOPT_COMMON_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <stdexcept>
#include <string>

namespace cotopt {

inline constexpr const char* kVersion = "0.1.0";

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using MatX = Eigen::MatrixXd;
using Mat6X = Eigen::Matrix<double, 6, Eigen::Dynamic>;

// Pipeline stages, used to map failures to CLI exit codes and messages.
enum class Stage { config, model, kinematics, coefficients, build, solve, audit, io };

const char* stage_name(Stage s);

class Error : public std::runtime_error {
 public:
  Error(Stage stage, const std::string& what) : std::runtime_error(what), stage_(stage) {}
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Stage::config, what) {}
};

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(Stage::model, what) {}
};

class KinematicsError : public Error {
 public:
  explicit KinematicsError(const std::string& what) : Error(Stage::kinematics, what) {}
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(Stage::solve, what) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(Stage::solve, what) {}
};

class AuditError : public Error {
 public:
  explicit AuditError(const std::string& what) : Error(Stage::audit, what) {}
};

}  // namespace cotopt

#endif  // COTOPT_COMMON_HPP_
