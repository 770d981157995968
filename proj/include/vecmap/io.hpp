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

#ifndef VECMAP__IO_HPP_
#define VECMAP__IO_HPP_

#include "vecmap/pipeline.hpp"
#include "vecmap/scan_simulator.hpp"

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vecmap::io
{
/// `x y z [intensity]` per line; intensity is ignored.
std::vector<Point3> read_cloud_text(const std::filesystem::path & path);
/// Little-endian float32 `x y z intensity` records.
std::vector<Point3> read_cloud_binary(const std::filesystem::path & path);
/// Dispatches on the `.txt` / `.bin` extension.
std::vector<Point3> read_cloud(const std::filesystem::path & path);

void write_cloud_text(const std::filesystem::path & path, std::span<const Point3> cloud);
void write_cloud_binary(const std::filesystem::path & path, std::span<const Point3> cloud);

/// Cloud file name for a timestamp, e.g. "12.300000.bin".
std::string cloud_file_name(double timestamp, bool binary);

/// `timestamp x y theta` lines.
std::vector<sim::TimedPose> read_poses(const std::filesystem::path & path);
void write_poses(const std::filesystem::path & path, std::span<const sim::TimedPose> poses);

/// Cloud files of a directory paired with the nearest pose, in timestamp order.
class FrameStream
{
public:
  /// Throws when no cloud pairs with any pose.
  FrameStream(
    const std::filesystem::path & frames_dir, const std::filesystem::path & poses_path,
    double max_gap = 0.05);

  /// Loads the next frame's cloud; nullopt at the end.
  std::optional<FrameInput> next();

  std::size_t size() const { return entries_.size(); }
  /// Clouds dropped for lack of a pose within the gate.
  std::size_t dropped() const { return dropped_; }
  const std::vector<std::string> & warnings() const { return warnings_; }

private:
  struct Entry
  {
    double timestamp;
    std::filesystem::path path;
    Pose2 pose;
  };
  std::vector<Entry> entries_;
  std::size_t cursor_{0};
  std::size_t dropped_{0};
  std::vector<std::string> warnings_;
};

/// Polygons as JSON lines and metrics as CSV, written frame by frame.
class OutputWriter
{
public:
  static constexpr const char * kMetricsHeader =
    "frame,timestamp,occupied_cells,boundary_vertices,polygon_vertices,polygon_count,t_grid_ms,"
    "t_vec_ms,t_total_ms";

  OutputWriter(std::filesystem::path out_path, std::filesystem::path metrics_path);

  /// On I/O failure drops a `<file>.partial` marker next to the outputs and throws.
  void write(const FrameOutput & frame);
  void close();

  std::size_t frames_written() const { return frames_; }

private:
  void fail(const std::string & what);

  std::filesystem::path out_path_;
  std::filesystem::path metrics_path_;
  std::ofstream out_;
  std::ofstream metrics_;
  std::size_t frames_{0};
};

/// One JSON object (no trailing newline) for a frame.
std::string polygons_json_line(const FrameOutput & frame, std::size_t index);

void write_outputs(
  std::span<const FrameOutput> frames, const std::filesystem::path & out_path,
  const std::filesystem::path & metrics_path);

}  // namespace vecmap::io

#endif  // VECMAP__IO_HPP_
