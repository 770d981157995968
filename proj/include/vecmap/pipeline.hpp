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

#ifndef VECMAP__PIPELINE_HPP_
#define VECMAP__PIPELINE_HPP_

#include "vecmap/config.hpp"
#include "vecmap/core.hpp"
#include "vecmap/occupancy_grid.hpp"
#include "vecmap/vectorization.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace vecmap
{
struct FrameInput
{
  double timestamp{0.0};
  std::vector<Point3> cloud;  // sensor frame
  Pose2 pose;                 // world frame
};

struct RunMetrics
{
  std::size_t occupied_cells{0};
  std::size_t boundary_vertices{0};
  std::size_t polygon_vertices{0};
  std::size_t polygon_count{0};
  double t_grid_ms{0.0};
  double t_vec_ms{0.0};
  double t_total_ms{0.0};
};

struct FrameOutput
{
  double timestamp{0.0};
  std::vector<Polygon> polygons;  // map frame, convex, counter-clockwise
  RunMetrics metrics;
};

class FrameRejected : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Per-frame scan -> grid -> polygons chain. Owns the rolling grid.
///
/// The map frame is the world frame rotated by the first frame's heading, so the grid axes
/// follow the initial vehicle heading for the whole run.
class Pipeline
{
public:
  explicit Pipeline(PipelineConfig cfg);

  /// Throws FrameRejected (leaving the state untouched) on non-finite input or a timestamp that
  /// does not increase.
  FrameOutput process_frame(const FrameInput & input);

  const PipelineConfig & config() const { return cfg_; }
  /// Null before the first accepted frame.
  const GridMap * grid() const { return grid_ ? &*grid_ : nullptr; }
  std::size_t frames_processed() const { return frames_; }
  /// Fallback count from the most recent frame's vectorization.
  std::size_t last_fallbacks() const { return last_fallbacks_; }

  /// World pose expressed in the map frame (requires a latched heading).
  Pose2 to_map_frame(const Pose2 & world) const;

private:
  PipelineConfig cfg_;
  std::optional<GridMap> grid_;
  double heading_{0.0};
  std::optional<double> last_timestamp_;
  std::size_t frames_{0};
  std::size_t last_fallbacks_{0};
};

}  // namespace vecmap

#endif  // VECMAP__PIPELINE_HPP_
