// Copyright 2026 The vecmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VECMAP__SCAN_SIMULATOR_HPP_
#define VECMAP__SCAN_SIMULATOR_HPP_

#include "vecmap/core.hpp"
#include "vecmap/vectorization.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace vecmap::sim
{
/// Axis-aligned box; `extent` holds full side lengths.
struct Box
{
  Point3 center;
  Point3 extent;
};

/// Ground height as a piecewise-linear function of world x, constant past both ends.
/// An empty profile is the plane z = 0.
struct GroundProfile
{
  std::vector<Point2> knots;  // (x, h), strictly increasing x

  double height_at(double x) const;
};

struct Scene
{
  GroundProfile ground;
  std::vector<Box> boxes;
  Point2 bounds_min{-100.0, -100.0};
  Point2 bounds_max{100.0, 100.0};

  void validate() const;
};

struct LidarModel
{
  std::vector<double> vertical_angles;  // [rad]
  double delta_s{0.2};                  // [deg]
  double max_range{60.0};
  double sensor_height{1.8};
  double range_noise_sigma{0.0};

  /// `beams` elevations spread evenly over [lowest_deg, highest_deg].
  static LidarModel uniform(std::size_t beams, double lowest_deg, double highest_deg);
  /// 40 beams from -25 to +15 degrees, 0.2 degree azimuth steps.
  static LidarModel default_model();
};

/// Casts every (beam, azimuth) ray and returns the hits in the sensor frame (x forward, z up,
/// origin at the sensor). Ordering is beam-major. Azimuth step i is cast at (i + 0.5) * delta_s.
std::vector<Point3> simulate_scan(
  const Scene & scene, const Pose2 & pose, const LidarModel & model, std::uint64_t seed = 0);

/// Ground-plane rectangle of every box, counter-clockwise.
std::vector<Polygon> footprint_oracle(const Scene & scene);

enum class TrajectoryKind { Straight, Arc };

struct TimedPose
{
  double timestamp{0.0};
  Pose2 pose;
};

/// Evenly spaced poses from the origin heading +x, 10 Hz timestamps. Arcs turn left with the
/// given radius.
std::vector<TimedPose> make_trajectory(
  TrajectoryKind kind, double length, double step, double radius = 20.0);

/// Parses `ground x0 h0 x1 h1 ...` and `box cx cy cz ex ey ez` lines (`#` comments).
Scene parse_scene(std::istream & in);
Scene load_scene(const std::string & path);

/// Built-in scenes: "empty", "box", "ramp", "cluttered".
std::optional<Scene> builtin_scene(const std::string & name);

}  // namespace vecmap::sim

#endif  // VECMAP__SCAN_SIMULATOR_HPP_
