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


#include "vecmap/ground_segmentation.hpp"
#include "vecmap/scan_simulator.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using vecmap::FanGridConfig;
using vecmap::Point2;
using vecmap::Point3;

namespace
{
FanGridConfig example_config()
{
  FanGridConfig cfg;
  cfg.d_max = 61.0;
  return cfg;
}

Point3 at_polar(double r, double deg, double z)
{
  const double a = vecmap::deg_to_rad(deg);
  return {r * std::cos(a), r * std::sin(a), z};
}

/// One sample per bin of segment 0 following z(r).
template <typename F>
vecmap::FanGrid single_segment_grid(const FanGridConfig & cfg, F z_of)
{
  std::vector<Point3> cloud;
  for (std::size_t j = 0; j < cfg.bin_count(); ++j) {
    const double r = cfg.d_min + (static_cast<double>(j) + 0.5) * cfg.delta_d;
    cloud.push_back(at_polar(r, 0.5, z_of(r)));
  }
  return vecmap::build_fan_grid(cloud, cfg);
}
}  // namespace

TEST(BinIndex, Examples)
{
  const auto cfg = example_config();
  EXPECT_EQ(vecmap::bin_index(1.0, 0.0, cfg), (vecmap::BinIndex{0, 0}));
  EXPECT_EQ(vecmap::bin_index(1.74, vecmap::deg_to_rad(45.5), cfg), (vecmap::BinIndex{45, 1}));
  EXPECT_FALSE(vecmap::bin_index(0.5, vecmap::deg_to_rad(10.0), cfg).has_value());
}

TEST(BinIndex, NegativeAnglesWrapAndMaxRangeIsKept)
{
  const auto cfg = example_config();
  EXPECT_EQ(vecmap::bin_index(2.0, vecmap::deg_to_rad(-0.5), cfg), (vecmap::BinIndex{359, 2}));
  const auto last = vecmap::bin_index(61.0, std::numbers::pi, cfg);
  ASSERT_TRUE(last.has_value());
  EXPECT_EQ(last->bin, cfg.bin_count() - 1);
  EXPECT_EQ(last->segment, 180U);
  EXPECT_FALSE(vecmap::bin_index(61.0001, 0.0, cfg).has_value());
}

TEST(ConfigValidation, RejectsBadFields)
{
  FanGridConfig cfg;
  cfg.delta_a = 7.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = FanGridConfig{};
  cfg.g_high = 0.1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_NO_THROW(FanGridConfig{}.validate());
}

TEST(FanGrid, KeepsLowestPointPerBin)
{
  const auto cfg = example_config();
  const std::vector<Point3> cloud{at_polar(5.1, 10.2, 0.5), at_polar(5.2, 10.4, 0.1)};
  const auto grid = vecmap::build_fan_grid(cloud, cfg);
  EXPECT_EQ(grid.occupied_bins(), 1U);
  EXPECT_DOUBLE_EQ(grid.at(10, 8)->z, 0.1);
}

TEST(FanGrid, EmptyCloud)
{
  const auto grid = vecmap::build_fan_grid({}, example_config());
  EXPECT_EQ(grid.occupied_bins(), 0U);
  EXPECT_EQ(grid.segments(), 360U);
  EXPECT_EQ(grid.bins(), 120U);
}

TEST(FanGrid, MatchesBruteForceBinningAndIsPermutationInvariant)
{
  const auto cfg = example_config();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-40.0, 40.0);
  std::uniform_real_distribution<double> height(-1.0, 2.0);
  std::vector<Point3> cloud;
  for (int i = 0; i < 4000; ++i) {
    cloud.push_back({coord(rng), coord(rng), height(rng)});
  }
  // oracle: bins by explicit degree arithmetic, minimum z kept
  std::map<std::pair<long, long>, double> lowest;
  for (const auto & p : cloud) {
    const double r = std::sqrt(p.x * p.x + p.y * p.y);
    if (r < cfg.d_min || r > cfg.d_max) {
      continue;
    }
    double deg = std::atan2(p.y, p.x) * 180.0 / std::numbers::pi;
    if (deg < 0) {
      deg += 360.0;
    }
    const long k = std::min(359L, static_cast<long>(std::floor(deg)));
    const long j = std::min(119L, static_cast<long>(std::floor((r - 1.0) / 0.5)));
    auto [it, inserted] = lowest.emplace(std::make_pair(k, j), p.z);
    if (!inserted) {
      it->second = std::min(it->second, p.z);
    }
  }
  const auto grid = vecmap::build_fan_grid(cloud, cfg);
  EXPECT_EQ(grid.occupied_bins(), lowest.size());
  for (const auto & [key, z] : lowest) {
    const auto & cell = grid.at(static_cast<std::size_t>(key.first), static_cast<std::size_t>(key.second));
    ASSERT_TRUE(cell.has_value());
    EXPECT_EQ(cell->z, z);
  }

  auto shuffled = cloud;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto grid2 = vecmap::build_fan_grid(shuffled, cfg);
  for (std::size_t k = 0; k < grid.segments(); ++k) {
    for (std::size_t j = 0; j < grid.bins(); ++j) {
      EXPECT_EQ(grid.at(k, j), grid2.at(k, j));
    }
  }
}

TEST(GroundLines, FlatGroundGivesOneZeroPiece)
{
  const auto cfg = example_config();
  const auto model = vecmap::fit_ground_lines(single_segment_grid(cfg, [](double) { return 0.0; }), cfg);
  ASSERT_EQ(model.segments[0].size(), 1U);
  EXPECT_NEAR(model.segments[0][0].slope, 0.0, 1e-6);
  EXPECT_NEAR(model.segments[0][0].intercept, 0.0, 1e-6);
  EXPECT_DOUBLE_EQ(model.segments[0][0].r_end, cfg.d_max);
}

TEST(GroundLines, RampSlopeMatchesLeastSquares)
{
  auto cfg = example_config();
  cfg.d_max = 21.0;
  const auto grid = single_segment_grid(cfg, [](double r) { return 0.1 * r; });
  const auto model = vecmap::fit_ground_lines(grid, cfg);
  ASSERT_EQ(model.segments[0].size(), 1U);
  std::vector<std::pair<double, double>> rz;
  for (std::size_t j = 0; j < grid.bins(); ++j) {
    const auto & p = grid.at(0, j);
    rz.emplace_back(std::hypot(p->x, p->y), p->z);
  }
  const auto [k, b] = oracle::least_squares(rz);
  EXPECT_NEAR(model.segments[0][0].slope, k, 1e-9);
  EXPECT_NEAR(model.segments[0][0].intercept, b, 1e-9);
  EXPECT_NEAR(k, 0.1, 1e-9);
}

TEST(GroundLines, StepSplitsIntoTwoPieces)
{
  auto cfg = example_config();
  cfg.fit_dist_tol = 0.2;
  cfg.d_max = 11.0;
  const auto model = vecmap::fit_ground_lines(
    single_segment_grid(cfg, [](double r) { return r < 5.0 ? 0.0 : 1.0; }), cfg);
  const auto & pieces = model.segments[0];
  ASSERT_EQ(pieces.size(), 2U);
  EXPECT_DOUBLE_EQ(pieces[0].r_begin, 1.0);
  EXPECT_DOUBLE_EQ(pieces[0].r_end, 5.0);
  EXPECT_DOUBLE_EQ(pieces[1].r_begin, 5.0);
  EXPECT_DOUBLE_EQ(pieces[1].r_end, 11.0);
  EXPECT_NEAR(pieces[0].intercept, 0.0, 1e-9);
  EXPECT_NEAR(pieces[1].intercept, 1.0, 1e-9);
}

TEST(GroundClearance, Examples)
{
  const auto cfg = example_config();
  vecmap::GroundModel model;
  model.segments.resize(cfg.segment_count());
  model.segments[0] = {{0.0, 0.0, 1.0, 61.0}};
  model.segments[1] = {{1.0, 0.0, 1.0, 61.0}};
  model.segments[2] = {{0.1, 0.05, 1.0, 61.0}};
  EXPECT_NEAR(vecmap::ground_clearance(at_polar(5.0, 0.5, 0.3), model, cfg), 0.3, 1e-12);
  EXPECT_NEAR(vecmap::ground_clearance(at_polar(1.0, 1.5, 1.0), model, cfg), 0.0, 1e-12);
  const double expected = std::abs(0.1 * 10.0 - 1.3 + 0.05) / std::sqrt(1.01);
  EXPECT_NEAR(vecmap::ground_clearance(at_polar(10.0, 2.5, 1.3), model, cfg), expected, 1e-12);
  EXPECT_NEAR(expected, 0.2487, 1e-4);
  // uncovered segment falls back to z
  EXPECT_DOUBLE_EQ(vecmap::ground_clearance({0.0, 5.0, 0.7}, model, cfg), 0.7);
}

TEST(GroundClearance, PointOnFittedLineIsZero)
{
  auto cfg = example_config();
  cfg.d_max = 21.0;
  const auto grid = single_segment_grid(cfg, [](double r) { return 0.05 * r + 0.02; });
  const auto model = vecmap::fit_ground_lines(grid, cfg);
  for (double r = 1.5; r < 20.0; r += 0.7) {
    const auto & line = *model.find(0, r);
    EXPECT_NEAR(
      vecmap::ground_clearance(at_polar(r, 0.5, line.slope * r + line.intercept), model, cfg), 0.0,
      1e-9);
  }
}

TEST(PassThrough, RemovesGroundAndOverheadPoints)
{
  const auto cfg = example_config();
  vecmap::GroundModel model;
  model.segments.resize(cfg.segment_count());
  for (auto & s : model.segments) {
    s = {{0.0, 0.0, 1.0, 61.0}};
  }
  const std::vector<Point3> cloud{
    at_polar(5.0, 3.0, 0.05), at_polar(6.0, 3.0, 4.0), at_polar(7.0, 3.0, 0.3),
    at_polar(7.0, 4.0, 1.2), at_polar(0.5, 3.0, 1.0)};
  const auto kept = vecmap::extract_obstacle_points(cloud, model, cfg);
  ASSERT_EQ(kept.size(), 2U);
  EXPECT_NEAR(kept[0].clearance, 0.3, 1e-12);
  EXPECT_NEAR(kept[1].clearance, 1.2, 1e-12);
}

TEST(Projection, NearestPointWinsPerRay)
{
  const auto cfg = example_config();
  const std::vector<Point2> pts{{7.0, 0.001}, {3.0, 0.001}};
  const auto scan = vecmap::project_to_scan(pts, cfg);
  EXPECT_EQ(scan.size(), 1800U);
  EXPECT_FALSE(scan.entries[0].is_virtual);
  EXPECT_DOUBLE_EQ(scan.entries[0].point.x, 3.0);
  EXPECT_EQ(scan.real_count(), 1U);
}

TEST(Projection, EmptyInputIsAllVirtualAtMaxRange)
{
  FanGridConfig cfg;
  cfg.delta_s = 1.0;
  cfg.d_max = 30.0;
  const auto scan = vecmap::project_to_scan(std::span<const Point2>{}, cfg);
  ASSERT_EQ(scan.size(), 360U);
  for (const auto & e : scan.entries) {
    EXPECT_TRUE(e.is_virtual);
    EXPECT_NEAR(std::hypot(e.point.x, e.point.y), 30.0, 1e-12);
  }
}

TEST(Projection, HalfTheRaysReal)
{
  FanGridConfig cfg;
  cfg.delta_s = 1.0;
  std::vector<Point2> pts;
  for (int i = 0; i < 360; i += 2) {
    const double a = vecmap::deg_to_rad(i + 0.5);
    pts.push_back({4.0 * std::cos(a), 4.0 * std::sin(a)});
  }
  const auto scan = vecmap::project_to_scan(pts, cfg);
  EXPECT_EQ(scan.real_count(), 180U);
  EXPECT_EQ(scan.size() - scan.real_count(), 180U);
  for (std::size_t i = 0; i < scan.size(); ++i) {
    EXPECT_EQ(scan.entries[i].is_virtual, i % 2 == 1);
  }
}

TEST(Projection, RangesStayWithinBounds)
{
  const FanGridConfig cfg;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-80.0, 80.0);
  std::vector<Point2> pts;
  for (int i = 0; i < 5000; ++i) {
    pts.push_back({coord(rng), coord(rng)});
  }
  const auto scan = vecmap::project_to_scan(pts, cfg);
  EXPECT_EQ(scan.size(), cfg.ray_count());
  for (const auto & e : scan.entries) {
    const double r = std::hypot(e.point.x, e.point.y);
    if (e.is_virtual) {
      EXPECT_NEAR(r, cfg.d_max, 1e-9);
    } else {
      EXPECT_GE(r, cfg.d_min);
      EXPECT_LE(r, cfg.d_max);
    }
  }
}

TEST(Segmentation, FlatPlaneRemovesAllGroundReturns)
{
  const auto scene = *vecmap::sim::builtin_scene("empty");
  const auto model = vecmap::sim::LidarModel::default_model();
  auto cloud = vecmap::sim::simulate_scan(scene, vecmap::Pose2(0, 0, 0), model);
  ASSERT_FALSE(cloud.empty());
  for (auto & p : cloud) {
    p.z += model.sensor_height;
  }
  const FanGridConfig cfg;
  const auto grid = vecmap::build_fan_grid(cloud, cfg);
  const auto ground = vecmap::fit_ground_lines(grid, cfg);
  for (const auto & seg : ground.segments) {
    for (const auto & line : seg) {
      EXPECT_NEAR(line.slope, 0.0, 1e-6);
    }
  }
  EXPECT_TRUE(vecmap::extract_obstacle_points(cloud, ground, cfg).empty());
  EXPECT_EQ(vecmap::segment_cloud(cloud, cfg).real_count(), 0U);
}

TEST(Segmentation, BoxFaceReturnsAreKept)
{
  const auto scene = *vecmap::sim::builtin_scene("box");
  const auto model = vecmap::sim::LidarModel::default_model();
  auto cloud = vecmap::sim::simulate_scan(scene, vecmap::Pose2(0, 0, 0), model);
  for (auto & p : cloud) {
    p.z += model.sensor_height;
  }
  const FanGridConfig cfg;
  const auto footprint = vecmap::sim::footprint_oracle(scene)[0].vertices;
  std::size_t face_returns = 0;
  for (const auto & p : cloud) {
    if (p.z >= 0.3 && p.z <= 1.2 && oracle::distance_to_ring(footprint, {p.x, p.y}) < 1e-6) {
      ++face_returns;
    }
  }
  ASSERT_GT(face_returns, 0U);
  const auto ground = vecmap::fit_ground_lines(vecmap::build_fan_grid(cloud, cfg), cfg);
  const auto kept = vecmap::extract_obstacle_points(cloud, ground, cfg);
  std::size_t kept_faces = 0;
  for (const auto & o : kept) {
    if (o.clearance >= 0.3 && o.clearance <= 1.2 &&
        oracle::distance_to_ring(footprint, o.point) < 1e-6) {
      ++kept_faces;
    }
  }
  EXPECT_EQ(kept_faces, face_returns);
}
