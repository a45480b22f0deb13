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

#include <doctest.h>

#include <random>

#include "cotopt/geometry.hpp"

using namespace cotopt;

TEST_CASE("skew matrix basics") {
  CHECK(skew(Vec3::Zero()).norm() == 0.0);

  Mat3 expected;
  expected << 0, 0, 0.2,
              0, 0, 0,
             -0.2, 0, 0;
  CHECK((skew(Vec3(0, 0.2, 0)) - expected).norm() < 1e-15);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 u(dist(rng), dist(rng), dist(rng));
    const Vec3 w(dist(rng), dist(rng), dist(rng));
    CHECK((skew(u) * w - u.cross(w)).norm() < 1e-14);
    CHECK((skew(u) + skew(u).transpose()).norm() == 0.0);
    CHECK((skew(u) * u).norm() < 1e-15);
  }
}

TEST_CASE("ZYZ rotation composition") {
  const Vec3 euler(0.3, -0.7, 1.1);
  const Mat3 r = rotation_zyz(euler);
  CHECK((r - rot_z(0.3) * rot_y(-0.7) * rot_z(1.1)).norm() < 1e-15);
  CHECK(is_rotation(r));
}

TEST_CASE("euler rate transform at (0, pi/2, 0)") {
  const Mat3 t = euler_rate_transform(Vec3(0.0, M_PI / 2.0, 0.0));
  Mat3 expected;
  expected << 0, 0, 1,
              0, 1, 0,
              1, 0, 0;
  CHECK((t - expected).norm() < 1e-12);
}

TEST_CASE("euler rate transform singularity") {
  CHECK_THROWS_AS(euler_rate_transform_checked(Vec3(0.2, 0.0, -0.4)), KinematicsError);
  CHECK_THROWS_AS(euler_rate_transform_checked(Vec3(0.0, M_PI, 0.0)), KinematicsError);
  CHECK_NOTHROW(euler_rate_transform_checked(Vec3(0.0, 1.0, 0.0)));
  // The unchecked forward map stays finite at the singularity.
  CHECK(euler_rate_transform(Vec3(0.2, 0.0, -0.4)).allFinite());
}

TEST_CASE("euler rates match finite differences of the rotation") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.2, 1.2);
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    Vec3 euler(dist(rng), dist(rng) + 1.5, dist(rng));  // keep theta away from 0
    Vec3 rate(dist(rng), dist(rng), dist(rng));

    const Mat3 r_plus = rotation_zyz(euler + h * rate);
    const Mat3 r_minus = rotation_zyz(euler - h * rate);
    const Mat3 r = rotation_zyz(euler);
    const Mat3 omega_hat = (r_plus - r_minus) / (2.0 * h) * r.transpose();

    const Vec3 omega = euler_rate_transform(euler) * rate;
    CHECK((omega_hat - skew(omega)).norm() < 1e-6);
  }
}

TEST_CASE("pose transforms compose and invert") {
  Pose a{Vec3(1, 2, 3), rot_z(0.4)};
  Pose b{Vec3(-0.5, 0.1, 0.0), rot_y(-0.8)};
  const Pose ab = a * b;
  const Pose round_trip = ab * ab.inverse();
  CHECK(round_trip.position.norm() < 1e-12);
  CHECK((round_trip.rotation - Mat3::Identity()).norm() < 1e-12);
}
