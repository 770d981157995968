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


#include "vecmap/scan_simulator.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using vecmap::Point2;
using vecmap::Point3;
using vecmap::Pose2;
using vecmap::sim::LidarModel;
using vecmap::sim::Scene;

TEST(Simulate, FlatGroundBeamRange)
{
  const Scene scene;
  const auto model = LidarModel::uniform(1, -10.0, -10.0);
  const auto cloud = vecmap::sim::simulate_scan(scene, Pose2(3, -2, 0.7), model);
  ASSERT_EQ(cloud.size(), 1800U);
  const double expected = 1.8 / std::sin(vecmap::deg_to_rad(10.0));
  EXPECT_NEAR(expected, 10.3658, 1e-4);
  for (const auto & p : cloud) {
    EXPECT_NEAR(std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z), expected, 1e-9);
    EXPECT_NEAR(p.z, -1.8, 1e-9);
  }
}

TEST(Simulate, HorizontalBeamHitsBoxFace)
{
  Scene scene;
  scene.boxes.push_back({{6.0, 0.0, 1.0}, {2.0, 2.0, 2.0}});
  const auto model = LidarModel::uniform(1, 0.0, 0.0);
  const auto cloud = vecmap::sim::simulate_scan(scene, Pose2(0, 0, 0), model);
  // face x = 5 subtends |azimuth| < atan(1/5); the sensor sits at z = 1.8 inside the box height
  const double half = std::atan2(1.0, 5.0);
  std::size_t face = 0;
  for (const auto & p : cloud) {
    EXPECT_NEAR(p.z, 0.0, 1e-12);
    if (std::abs(std::atan2(p.y, p.x)) < half) {
      EXPECT_NEAR(p.x, 5.0, 1e-9);
      ++face;
    }
  }
  // rays cast at (i + 0.5) * 0.2 degrees: count those within the face's angular span
  std::size_t expected = 0;
  for (int i = 0; i < 1800; ++i) {
    double az = (i + 0.5) * 0.2;
    if (az > 180.0) {
      az -= 360.0;
    }
    if (std::abs(vecmap::deg_to_rad(az)) < half) {
      ++expected;
    }
  }
  EXPECT_EQ(face, expected);
  EXPECT_EQ(cloud.size(), expected);  // nothing else within range at 0 degrees
}

TEST(Simulate, UpwardBeamOverEmptySkyReturnsNothing)
{
  const auto cloud =
    vecmap::sim::simulate_scan(Scene{}, Pose2(0, 0, 0), LidarModel::uniform(1, 5.0, 5.0));
  EXPECT_TRUE(cloud.empty());
}

TEST(Simulate, RangesAndGroundReturnsOnRamp)
{
  const Scene scene = *vecmap::sim::builtin_scene("ramp");
  const auto model = LidarModel::default_model();
  const Pose2 pose(12.0, 1.0, 0.3);
  const auto cloud = vecmap::sim::simulate_scan(scene, pose, model);
  ASSERT_FALSE(cloud.empty());
  const double sensor_z = scene.ground.height_at(pose.x) + model.sensor_height;
  const auto boxes = vecmap::sim::footprint_oracle(scene);
  for (const auto & p : cloud) {
    ASSERT_LE(std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z), model.max_range + 1e-9);
    const double wx = pose.x + std::cos(pose.theta) * p.x - std::sin(pose.theta) * p.y;
    const double wy = pose.y + std::sin(pose.theta) * p.x + std::cos(pose.theta) * p.y;
    const double wz = sensor_z + p.z;
    const bool on_box = oracle::distance_to_ring(boxes[0].vertices, {wx, wy}) < 1e-6 ||
                        oracle::inside(boxes[0].vertices, {wx, wy});
    if (!on_box) {
      ASSERT_NEAR(wz, scene.ground.height_at(wx), 1e-9);
    }
  }
}

TEST(Simulate, BoxReturnsProjectIntoFootprint)
{
  const Scene scene = *vecmap::sim::builtin_scene("cluttered");
  const auto model = LidarModel::default_model();
  const Pose2 pose(10.0, 0.0, 0.0);
  const auto cloud = vecmap::sim::simulate_scan(scene, pose, model);
  const auto footprints = vecmap::sim::footprint_oracle(scene);
  std::size_t above_ground = 0;
  for (const auto & p : cloud) {
    const double wz = model.sensor_height + p.z;
    if (wz < 1e-6) {
      continue;  // ground return
    }
    ++above_ground;
    const Point2 w{pose.x + p.x, pose.y + p.y};
    bool contained = false;
    for (const auto & f : footprints) {
      contained = contained || oracle::inside(f.vertices, w) ||
                  oracle::distance_to_ring(f.vertices, w) < 1e-6;
    }
    ASSERT_TRUE(contained) << w.x << "," << w.y;
  }
  EXPECT_GT(above_ground, 1000U);
}

TEST(Simulate, NoiseIsSeededAndNoiseFreeIsDeterministic)
{
  const Scene scene = *vecmap::sim::builtin_scene("box");
  auto model = LidarModel::default_model();
  EXPECT_EQ(
    vecmap::sim::simulate_scan(scene, Pose2(1, 0, 0), model, 1),
    vecmap::sim::simulate_scan(scene, Pose2(1, 0, 0), model, 2));
  model.range_noise_sigma = 0.02;
  const auto a = vecmap::sim::simulate_scan(scene, Pose2(1, 0, 0), model, 5);
  const auto b = vecmap::sim::simulate_scan(scene, Pose2(1, 0, 0), model, 5);
  const auto c = vecmap::sim::simulate_scan(scene, Pose2(1, 0, 0), model, 6);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Footprint, Examples)
{
  Scene scene;
  EXPECT_TRUE(vecmap::sim::footprint_oracle(scene).empty());
  scene.boxes.push_back({{5.0, 0.0, 1.0}, {2.0, 2.0, 2.0}});
  scene.boxes.push_back({{5.5, 0.5, 1.0}, {2.0, 2.0, 2.0}});
  const auto f = vecmap::sim::footprint_oracle(scene);
  ASSERT_EQ(f.size(), 2U);
  EXPECT_EQ(f[0].vertices, (std::vector<Point2>{{4, -1}, {6, -1}, {6, 1}, {4, 1}}));
  EXPECT_GT(oracle::shoelace(f[1].vertices), 0.0);
}

TEST(Trajectory, StraightCounts)
{
  using vecmap::sim::TrajectoryKind;
  const auto poses = vecmap::sim::make_trajectory(TrajectoryKind::Straight, 10.0, 1.0);
  ASSERT_EQ(poses.size(), 11U);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    EXPECT_DOUBLE_EQ(poses[i].pose.x, static_cast<double>(i));
    EXPECT_DOUBLE_EQ(poses[i].pose.y, 0.0);
    EXPECT_DOUBLE_EQ(poses[i].pose.theta, 0.0);
    EXPECT_NEAR(poses[i].timestamp, 0.1 * static_cast<double>(i), 1e-12);
  }
  const auto two = vecmap::sim::make_trajectory(TrajectoryKind::Straight, 3.0, 5.0);
  ASSERT_EQ(two.size(), 2U);
  EXPECT_DOUBLE_EQ(two[1].pose.x, 3.0);
  EXPECT_THROW(vecmap::sim::make_trajectory(TrajectoryKind::Straight, 3.0, 0.0), std::invalid_argument);
}

TEST(Trajectory, ArcHeadingsAdvanceByStepOverRadius)
{
  const double r = 15.0;
  const double step = 0.5;
  const auto poses = vecmap::sim::make_trajectory(vecmap::sim::TrajectoryKind::Arc, 20.0, step, r);
  ASSERT_EQ(poses.size(), 41U);
  for (std::size_t i = 1; i < poses.size(); ++i) {
    const double dtheta = vecmap::normalize_angle(poses[i].pose.theta - poses[i - 1].pose.theta);
    EXPECT_NEAR(dtheta, step / r, 1e-12);
    // on the circle centred at (0, r)
    EXPECT_NEAR(std::hypot(poses[i].pose.x, poses[i].pose.y - r), r, 1e-9);
    // heading tangent to the path: chord direction is the mean of neighbouring headings
    const double chord = std::atan2(
      poses[i].pose.y - poses[i - 1].pose.y, poses[i].pose.x - poses[i - 1].pose.x);
    EXPECT_NEAR(
      vecmap::normalize_angle(chord - (poses[i - 1].pose.theta + 0.5 * step / r)), 0.0, 1e-9);
  }
}

TEST(SceneFile, ParsesAndValidates)
{
  std::istringstream in("# demo\nground 0 0 10 1\nbox 5 2 1.5 2 2 2  # comment\n\n");
  const Scene scene = vecmap::sim::parse_scene(in);
  ASSERT_EQ(scene.ground.knots.size(), 2U);
  EXPECT_DOUBLE_EQ(scene.ground.height_at(5.0), 0.5);
  EXPECT_DOUBLE_EQ(scene.ground.height_at(-3.0), 0.0);
  EXPECT_DOUBLE_EQ(scene.ground.height_at(30.0), 1.0);
  ASSERT_EQ(scene.boxes.size(), 1U);

  std::istringstream bad_kind("tree 1 2 3\n");
  EXPECT_THROW(vecmap::sim::parse_scene(bad_kind), std::runtime_error);
  std::istringstream bad_box("box 1 2 3 0 1 1\n");
  EXPECT_THROW(vecmap::sim::parse_scene(bad_box), std::invalid_argument);
  std::istringstream buried("box 1 2 -3 1 1 1\n");
  EXPECT_THROW(vecmap::sim::parse_scene(buried), std::invalid_argument);
  for (const char * name : {"empty", "box", "ramp", "cluttered"}) {
    ASSERT_TRUE(vecmap::sim::builtin_scene(name).has_value());
    EXPECT_NO_THROW(vecmap::sim::builtin_scene(name)->validate());
  }
  EXPECT_EQ(vecmap::sim::builtin_scene("cluttered")->boxes.size(), 8U);
  EXPECT_FALSE(vecmap::sim::builtin_scene("nope").has_value());
}
