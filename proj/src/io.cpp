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

#include "vecmap/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace vecmap::io
{
namespace
{
std::runtime_error io_error(const fs::path & path, const std::string & what)
{
  return std::runtime_error(path.string() + ": " + what);
}

std::uint32_t load_le32(const unsigned char * b)
{
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void store_le32(unsigned char * b, std::uint32_t v)
{
  b[0] = static_cast<unsigned char>(v & 0xFF);
  b[1] = static_cast<unsigned char>((v >> 8) & 0xFF);
  b[2] = static_cast<unsigned char>((v >> 16) & 0xFF);
  b[3] = static_cast<unsigned char>((v >> 24) & 0xFF);
}

std::optional<double> timestamp_of(const fs::path & path)
{
  const std::string stem = path.stem().string();
  std::size_t used = 0;
  try {
    const double t = std::stod(stem, &used);
    if (used == stem.size() && std::isfinite(t)) {
      return t;
    }
  } catch (const std::exception &) {
  }
  return std::nullopt;
}

std::string format_fixed(double v, int digits)
{
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*f", digits, v);
  return buf.data();
}

}  // namespace

std::vector<Point3> read_cloud_text(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw io_error(path, "cannot open");
  }
  std::vector<Point3> cloud;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    Point3 p;
    if (!(ss >> p.x)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) {
        continue;
      }
      throw io_error(path, "line " + std::to_string(line_no) + ": unparseable point");
    }
    if (!(ss >> p.y >> p.z)) {
      throw io_error(path, "line " + std::to_string(line_no) + ": expected x y z");
    }
    cloud.push_back(p);
  }
  return cloud;
}

std::vector<Point3> read_cloud_binary(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw io_error(path, "cannot open");
  }
  std::vector<unsigned char> bytes(
    (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 16 != 0) {
    throw io_error(path, "size is not a multiple of 16 bytes");
  }
  std::vector<Point3> cloud;
  cloud.reserve(bytes.size() / 16);
  for (std::size_t off = 0; off < bytes.size(); off += 16) {
    const auto x = std::bit_cast<float>(load_le32(&bytes[off]));
    const auto y = std::bit_cast<float>(load_le32(&bytes[off + 4]));
    const auto z = std::bit_cast<float>(load_le32(&bytes[off + 8]));
    cloud.push_back({x, y, z});
  }
  return cloud;
}

std::vector<Point3> read_cloud(const fs::path & path)
{
  const auto ext = path.extension();
  if (ext == ".bin") {
    return read_cloud_binary(path);
  }
  if (ext == ".txt") {
    return read_cloud_text(path);
  }
  throw io_error(path, "unknown cloud extension");
}

void write_cloud_text(const fs::path & path, std::span<const Point3> cloud)
{
  std::ofstream out(path);
  if (!out) {
    throw io_error(path, "cannot open for writing");
  }
  std::array<char, 128> buf{};
  for (const Point3 & p : cloud) {
    std::snprintf(buf.data(), buf.size(), "%.17g %.17g %.17g 0\n", p.x, p.y, p.z);
    out << buf.data();
  }
  if (!out) {
    throw io_error(path, "write failed");
  }
}

void write_cloud_binary(const fs::path & path, std::span<const Point3> cloud)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw io_error(path, "cannot open for writing");
  }
  std::vector<unsigned char> bytes(cloud.size() * 16, 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    unsigned char * rec = &bytes[i * 16];
    store_le32(rec, std::bit_cast<std::uint32_t>(static_cast<float>(cloud[i].x)));
    store_le32(rec + 4, std::bit_cast<std::uint32_t>(static_cast<float>(cloud[i].y)));
    store_le32(rec + 8, std::bit_cast<std::uint32_t>(static_cast<float>(cloud[i].z)));
    store_le32(rec + 12, std::bit_cast<std::uint32_t>(0.0F));
  }
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw io_error(path, "write failed");
  }
}

std::string cloud_file_name(double timestamp, bool binary)
{
  return format_fixed(timestamp, 6) + (binary ? ".bin" : ".txt");
}

std::vector<sim::TimedPose> read_poses(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw io_error(path, "cannot open");
  }
  std::vector<sim::TimedPose> poses;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream ss(line);
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    if (!(ss >> t >> x >> y >> theta)) {
      throw io_error(path, "line " + std::to_string(line_no) + ": expected timestamp x y theta");
    }
    poses.push_back({t, Pose2(x, y, theta)});
  }
  std::stable_sort(poses.begin(), poses.end(), [](const auto & a, const auto & b) {
    return a.timestamp < b.timestamp;
  });
  return poses;
}

void write_poses(const fs::path & path, std::span<const sim::TimedPose> poses)
{
  std::ofstream out(path);
  if (!out) {
    throw io_error(path, "cannot open for writing");
  }
  std::array<char, 160> buf{};
  for (const auto & p : poses) {
    std::snprintf(
      buf.data(), buf.size(), "%.6f %.17g %.17g %.17g\n", p.timestamp, p.pose.x, p.pose.y,
      p.pose.theta);
    out << buf.data();
  }
  if (!out) {
    throw io_error(path, "write failed");
  }
}

FrameStream::FrameStream(const fs::path & frames_dir, const fs::path & poses_path, double max_gap)
{
  if (!fs::is_directory(frames_dir)) {
    throw io_error(frames_dir, "not a directory");
  }
  const auto poses = read_poses(poses_path);

  std::vector<std::pair<double, fs::path>> clouds;
  for (const auto & entry : fs::directory_iterator(frames_dir)) {
    const auto ext = entry.path().extension();
    if (!entry.is_regular_file() || (ext != ".txt" && ext != ".bin")) {
      continue;
    }
    if (const auto t = timestamp_of(entry.path())) {
      clouds.emplace_back(*t, entry.path());
    } else {
      warnings_.push_back("skipping " + entry.path().string() + ": no timestamp in name");
    }
  }
  std::sort(clouds.begin(), clouds.end());

  for (const auto & [t, path] : clouds) {
    if (!entries_.empty() && !(t > entries_.back().timestamp)) {
      warnings_.push_back("skipping " + path.string() + ": duplicate timestamp");
      continue;
    }
    const auto it = std::lower_bound(
      poses.begin(), poses.end(), t, [](const auto & p, double v) { return p.timestamp < v; });
    const sim::TimedPose * best = nullptr;
    if (it != poses.end()) {
      best = &*it;
    }
    if (it != poses.begin()) {
      const auto & prev = *std::prev(it);
      if (!best || t - prev.timestamp <= best->timestamp - t) {
        best = &prev;
      }
    }
    if (!best || std::abs(best->timestamp - t) > max_gap + 1e-9) {
      ++dropped_;
      warnings_.push_back("dropping " + path.string() + ": no pose within gate");
      continue;
    }
    entries_.push_back({t, path, best->pose});
  }
  if (entries_.empty() && !clouds.empty()) {
    throw std::runtime_error("no cloud timestamps overlap the pose file");
  }
}

std::optional<FrameInput> FrameStream::next()
{
  if (cursor_ >= entries_.size()) {
    return std::nullopt;
  }
  const Entry & e = entries_[cursor_++];
  return FrameInput{e.timestamp, read_cloud(e.path), e.pose};
}

std::string polygons_json_line(const FrameOutput & frame, std::size_t index)
{
  nlohmann::ordered_json j;
  j["t"] = frame.timestamp;
  auto polygons = nlohmann::ordered_json::array();
  for (const Polygon & poly : frame.polygons) {
    auto ring = nlohmann::ordered_json::array();
    for (const Point2 & p : poly.vertices) {
      ring.push_back({p.x, p.y});
    }
    polygons.push_back(std::move(ring));
  }
  j["polygons"] = std::move(polygons);
  j["frame"] = index;
  return j.dump();
}

OutputWriter::OutputWriter(fs::path out_path, fs::path metrics_path)
: out_path_(std::move(out_path)), metrics_path_(std::move(metrics_path))
{
  out_.open(out_path_, std::ios::trunc);
  metrics_.open(metrics_path_, std::ios::trunc);
  if (!out_ || !metrics_) {
    fail("cannot open outputs for writing");
  }
  metrics_ << kMetricsHeader << '\n';
  if (!metrics_) {
    fail("write failed");
  }
}

void OutputWriter::fail(const std::string & what)
{
  for (const auto & path : {out_path_, metrics_path_}) {
    std::ofstream marker(path.string() + ".partial");
    marker << "incomplete after " << frames_ << " frames: " << what << '\n';
  }
  throw std::runtime_error("output: " + what);
}

void OutputWriter::write(const FrameOutput & frame)
{
  const std::size_t index = frames_;
  out_ << polygons_json_line(frame, index) << '\n';
  const auto & m = frame.metrics;
  metrics_ << index << ',' << format_fixed(frame.timestamp, 6) << ',' << m.occupied_cells << ','
           << m.boundary_vertices << ',' << m.polygon_vertices << ',' << m.polygon_count << ','
           << format_fixed(m.t_grid_ms, 3) << ',' << format_fixed(m.t_vec_ms, 3) << ','
           << format_fixed(m.t_total_ms, 3) << '\n';
  if (!out_ || !metrics_) {
    fail("write failed");
  }
  ++frames_;
}

void OutputWriter::close()
{
  out_.flush();
  metrics_.flush();
  if (!out_ || !metrics_) {
    fail("flush failed");
  }
  out_.close();
  metrics_.close();
}

void write_outputs(
  std::span<const FrameOutput> frames, const fs::path & out_path, const fs::path & metrics_path)
{
  OutputWriter writer(out_path, metrics_path);
  for (const FrameOutput & f : frames) {
    writer.write(f);
  }
  writer.close();
}

}  // namespace vecmap::io
