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

#ifndef VECMAP__GROUND_SEGMENTATION_HPP_
#define VECMAP__GROUND_SEGMENTATION_HPP_

#include "vecmap/core.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vecmap
{
/// Fan-shaped (polar) binning and obstacle filtering parameters.
/// Angles are in degrees here because they come straight from config files.
struct FanGridConfig
{
  double delta_a{1.0};  // segment angle resolution [deg]
  double delta_d{0.5};  // bin range resolution [m]
  double d_min{1.0};
  double d_max{60.0};
  double delta_s{0.2};  // LiDAR horizontal resolution [deg]
  double g_low{0.2};
  double g_high{2.5};

  // ground line growing
  double seed_z_tol{0.25};
  double max_slope{0.30};
  double fit_dist_tol{0.10};

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  std::size_t segment_count() const;
  std::size_t bin_count() const;
  std::size_t ray_count() const;
};

struct BinIndex
{
  std::size_t segment{0};
  std::size_t bin{0};

  bool operator==(const BinIndex &) const = default;
};

/// Segment/bin of a polar sample, or nullopt when the range is outside [d_min, d_max].
std::optional<BinIndex> bin_index(double range, double angle, const FanGridConfig & cfg);

/// Lowest-z point per (segment, bin) cell of the fan grid.
class FanGrid
{
public:
  FanGrid(std::size_t segments, std::size_t bins);

  std::size_t segments() const { return segments_; }
  std::size_t bins() const { return bins_; }

  const std::optional<Point3> & at(std::size_t segment, std::size_t bin) const
  {
    return cells_[segment * bins_ + bin];
  }
  std::optional<Point3> & at(std::size_t segment, std::size_t bin)
  {
    return cells_[segment * bins_ + bin];
  }

  std::size_t occupied_bins() const;

private:
  std::size_t segments_;
  std::size_t bins_;
  std::vector<std::optional<Point3>> cells_;
};

FanGrid build_fan_grid(std::span<const Point3> cloud, const FanGridConfig & cfg);

/// One straight ground piece z = slope * r + intercept valid over [r_begin, r_end].
struct GroundLine
{
  double slope{0.0};
  double intercept{0.0};
  double r_begin{0.0};
  double r_end{0.0};
};

struct GroundModel
{
  /// Pieces per segment, ordered by range, with disjoint intervals.
  std::vector<std::vector<GroundLine>> segments;

  /// Piece covering the given sample, if any.
  const GroundLine * find(std::size_t segment, double range) const;
};

GroundModel fit_ground_lines(const FanGrid & grid, const FanGridConfig & cfg);

/// Height of a point above its segment's ground piece; falls back to z when uncovered.
double ground_clearance(const Point3 & p, const GroundModel & model, const FanGridConfig & cfg);

struct ObstaclePoint
{
  Point2 point;
  double clearance{0.0};
};

std::vector<ObstaclePoint> extract_obstacle_points(
  std::span<const Point3> cloud, const GroundModel & model, const FanGridConfig & cfg);

struct ScanEntry
{
  Point2 point;
  bool is_virtual{true};
};

/// Fixed-size 2D pseudo-scan, one entry per horizontal LiDAR angle.
struct ObstacleScan
{
  double delta_s{0.2};  // [deg]
  std::vector<ScanEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::size_t real_count() const;
};

ObstacleScan project_to_scan(std::span<const Point2> obstacles, const FanGridConfig & cfg);
ObstacleScan project_to_scan(std::span<const ObstaclePoint> obstacles, const FanGridConfig & cfg);

/// Full cloud -> pseudo-scan chain.
ObstacleScan segment_cloud(std::span<const Point3> cloud, const FanGridConfig & cfg);

}  // namespace vecmap

#endif  // VECMAP__GROUND_SEGMENTATION_HPP_
