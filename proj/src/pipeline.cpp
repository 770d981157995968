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

#include "vecmap/pipeline.hpp"

#include "vecmap/ground_segmentation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <span>
#include <string>

namespace vecmap
{
namespace
{
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point from, Clock::time_point to)
{
  return std::chrono::duration<double, std::milli>(to - from).count();
}

}  // namespace

Pipeline::Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

Pose2 Pipeline::to_map_frame(const Pose2 & world) const
{
  const double c = std::cos(-heading_);
  const double s = std::sin(-heading_);
  return Pose2(c * world.x - s * world.y, s * world.x + c * world.y, world.theta - heading_);
}

FrameOutput Pipeline::process_frame(const FrameInput & input)
{
  if (!std::isfinite(input.timestamp)) {
    throw FrameRejected("frame rejected: non-finite timestamp");
  }
  if (last_timestamp_ && !(input.timestamp > *last_timestamp_)) {
    throw FrameRejected(
      "frame rejected: timestamp " + std::to_string(input.timestamp) + " does not increase");
  }
  if (!input.pose.finite()) {
    throw FrameRejected("frame rejected: non-finite pose");
  }
  const auto bad = std::find_if(
    input.cloud.begin(), input.cloud.end(), [](const Point3 & p) { return !is_finite(p); });
  if (bad != input.cloud.end()) {
    throw FrameRejected(
      "frame rejected: non-finite point at index " +
      std::to_string(std::distance(input.cloud.begin(), bad)));
  }

  const auto t0 = Clock::now();

  // sensor frame -> vehicle frame (ground under the vehicle at z = 0)
  std::vector<Point3> cloud(input.cloud);
  for (Point3 & p : cloud) {
    p.z += cfg_.sensor_height;
  }
  const ObstacleScan scan = segment_cloud(std::span<const Point3>(cloud), cfg_.fan);

  if (!grid_) {
    heading_ = input.pose.theta;
  }
  const Pose2 pose = to_map_frame(input.pose);
  const Point2 center = map_center(pose, cfg_.grid.lambda);
  if (!grid_) {
    grid_.emplace(cfg_.grid.width, cfg_.grid.height, cfg_.grid.resolution, center, heading_);
  } else {
    grid_->recenter(center);
  }
  integrate_scan(*grid_, scan, pose, cfg_.grid);
  const auto t1 = Clock::now();

  VectorizationResult vec = vectorize(*grid_, cfg_.grid, cfg_.vec);
  const auto t2 = Clock::now();

  FrameOutput out;
  out.timestamp = input.timestamp;
  out.metrics.occupied_cells = vec.occupied_cells;
  out.metrics.boundary_vertices = vec.boundary_vertices;
  out.metrics.polygon_vertices = vec.polygon_vertices;
  out.metrics.polygon_count = vec.polygons.size();
  out.polygons = std::move(vec.polygons);
  last_fallbacks_ = vec.fallbacks;
  last_timestamp_ = input.timestamp;
  ++frames_;

  const auto t3 = Clock::now();
  out.metrics.t_grid_ms = elapsed_ms(t0, t1);
  out.metrics.t_vec_ms = elapsed_ms(t1, t2);
  out.metrics.t_total_ms = elapsed_ms(t0, t3);
  return out;
}

}  // namespace vecmap
