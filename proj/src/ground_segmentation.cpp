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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace vecmap
{
namespace
{
// Guards floor() against values like 1799.9999999 that are meant to be integral.
constexpr double kFloorSlack = 1e-9;

std::size_t floor_count(double ratio)
{
  return static_cast<std::size_t>(std::floor(ratio + kFloorSlack));
}

/// Azimuth in degrees, shifted to [0, 360).
double azimuth_deg(double angle_rad)
{
  double deg = rad_to_deg(angle_rad);
  if (deg < 0.0) {
    deg += 360.0;
  }
  if (deg >= 360.0) {
    deg -= 360.0;
  }
  return deg;
}

void require(bool ok, const char * key, const char * what)
{
  if (!ok) {
    throw std::invalid_argument(std::string(key) + ": " + what);
  }
}

/// Running least-squares fit of z = slope * r + intercept.
struct LineAccumulator
{
  double n{0.0};
  double sr{0.0};
  double sz{0.0};
  double srr{0.0};
  double srz{0.0};

  void add(double r, double z)
  {
    n += 1.0;
    sr += r;
    sz += z;
    srr += r * r;
    srz += r * z;
  }

  // Valid for n >= 2 with distinct ranges.
  std::pair<double, double> solve() const
  {
    const double denom = n * srr - sr * sr;
    if (std::abs(denom) < 1e-12) {
      return {0.0, sz / n};
    }
    const double slope = (n * srz - sr * sz) / denom;
    return {slope, (sz - slope * sr) / n};
  }
};

double line_distance(double slope, double intercept, double r, double z)
{
  return std::abs(slope * r - z + intercept) / std::sqrt(slope * slope + 1.0);
}

struct BinSample
{
  std::size_t bin;
  double r;
  double z;
};

}  // namespace

void FanGridConfig::validate() const
{
  require(delta_a > 0.0, "delta_a", "must be positive");
  const double segments = 360.0 / delta_a;
  require(
    std::abs(segments - std::round(segments)) < 1e-6, "delta_a", "must divide 360 degrees");
  require(delta_d > 0.0, "delta_d", "must be positive");
  require(d_min >= 0.0, "d_min", "must be non-negative");
  require(d_min < d_max, "d_max", "d_min < d_max required");
  require(floor_count((d_max - d_min) / delta_d) >= 1, "delta_d", "must be <= d_max - d_min");
  require(delta_s > 0.0, "delta_s", "must be positive");
  require(g_low >= 0.0, "g_low", "must be non-negative");
  require(g_low < g_high, "g_high", "g_low < g_high required");
  require(seed_z_tol >= 0.0, "seed_z_tol", "must be non-negative");
  require(max_slope >= 0.0, "max_slope", "must be non-negative");
  require(fit_dist_tol >= 0.0, "fit_dist_tol", "must be non-negative");
}

std::size_t FanGridConfig::segment_count() const { return floor_count(360.0 / delta_a); }

std::size_t FanGridConfig::bin_count() const { return floor_count((d_max - d_min) / delta_d); }

std::size_t FanGridConfig::ray_count() const { return floor_count(360.0 / delta_s); }

std::optional<BinIndex> bin_index(double range, double angle, const FanGridConfig & cfg)
{
  if (!(range >= cfg.d_min && range <= cfg.d_max)) {
    return std::nullopt;
  }
  const std::size_t m = cfg.segment_count();
  const std::size_t n = cfg.bin_count();
  const std::size_t k =
    std::min(floor_count(azimuth_deg(angle) / cfg.delta_a), m - 1);
  // r == d_max (or the tail past the last full bin) lands in the last bin
  const std::size_t j = std::min(floor_count((range - cfg.d_min) / cfg.delta_d), n - 1);
  return BinIndex{k, j};
}

FanGrid::FanGrid(std::size_t segments, std::size_t bins)
: segments_(segments), bins_(bins), cells_(segments * bins)
{
}

std::size_t FanGrid::occupied_bins() const
{
  return static_cast<std::size_t>(
    std::count_if(cells_.begin(), cells_.end(), [](const auto & c) { return c.has_value(); }));
}

FanGrid build_fan_grid(std::span<const Point3> cloud, const FanGridConfig & cfg)
{
  FanGrid grid(cfg.segment_count(), cfg.bin_count());
  for (const Point3 & p : cloud) {
    const Polar polar = polar_of(p);
    const auto idx = bin_index(polar.range, polar.angle, cfg);
    if (!idx) {
      continue;
    }
    auto & cell = grid.at(idx->segment, idx->bin);
    // ties on z keep the lexicographically smaller point so the result is order-free
    if (
      !cell || p.z < cell->z ||
      (p.z == cell->z && std::tie(p.x, p.y) < std::tie(cell->x, cell->y))) {
      cell = p;
    }
  }
  return grid;
}

const GroundLine * GroundModel::find(std::size_t segment, double range) const
{
  if (segment >= segments.size()) {
    return nullptr;
  }
  for (const GroundLine & line : segments[segment]) {
    if (range >= line.r_begin && range <= line.r_end) {
      return &line;
    }
  }
  return nullptr;
}

GroundModel fit_ground_lines(const FanGrid & grid, const FanGridConfig & cfg)
{
  GroundModel model;
  model.segments.resize(grid.segments());

  std::vector<BinSample> samples;
  for (std::size_t k = 0; k < grid.segments(); ++k) {
    samples.clear();
    for (std::size_t j = 0; j < grid.bins(); ++j) {
      if (const auto & p = grid.at(k, j)) {
        samples.push_back({j, std::hypot(p->x, p->y), p->z});
      }
    }

    // seed: nearest sample near the vehicle's ground plane (z = 0)
    auto seed = std::find_if(samples.begin(), samples.end(), [&](const BinSample & s) {
      return std::abs(s.z) <= cfg.seed_z_tol;
    });
    if (std::distance(seed, samples.end()) < 2) {
      continue;
    }

    auto & pieces = model.segments[k];
    LineAccumulator acc;
    std::size_t first_bin = seed->bin;
    std::size_t last_bin = seed->bin;
    double last_r = seed->r;
    double last_z = seed->z;
    acc.add(seed->r, seed->z);

    auto close_piece = [&]() {
      if (acc.n >= 2.0) {
        const auto [slope, intercept] = acc.solve();
        const double r_end = last_bin + 1 == grid.bins()
                               ? cfg.d_max
                               : cfg.d_min + static_cast<double>(last_bin + 1) * cfg.delta_d;
        pieces.push_back(
          {slope, intercept, cfg.d_min + static_cast<double>(first_bin) * cfg.delta_d, r_end});
      }
    };

    for (auto it = std::next(seed); it != samples.end(); ++it) {
      bool accept = false;
      if (acc.n < 2.0) {
        const double dr = it->r - last_r;
        accept = dr > 0.0 && std::abs(it->z - last_z) <= cfg.max_slope * dr;
      } else {
        const auto [slope, intercept] = acc.solve();
        if (line_distance(slope, intercept, it->r, it->z) <= cfg.fit_dist_tol) {
          LineAccumulator grown = acc;
          grown.add(it->r, it->z);
          accept = std::abs(grown.solve().first) <= cfg.max_slope;
        }
      }

      if (accept) {
        acc.add(it->r, it->z);
        last_bin = it->bin;
      } else {
        close_piece();
        acc = LineAccumulator{};
        acc.add(it->r, it->z);
        first_bin = it->bin;
        last_bin = it->bin;
      }
      last_r = it->r;
      last_z = it->z;
    }
    close_piece();
  }
  return model;
}

double ground_clearance(const Point3 & p, const GroundModel & model, const FanGridConfig & cfg)
{
  const Polar polar = polar_of(p);
  const auto idx = bin_index(polar.range, polar.angle, cfg);
  if (!idx) {
    return p.z;
  }
  const GroundLine * line = model.find(idx->segment, polar.range);
  if (line == nullptr) {
    return p.z;
  }
  return line_distance(line->slope, line->intercept, polar.range, p.z);
}

std::vector<ObstaclePoint> extract_obstacle_points(
  std::span<const Point3> cloud, const GroundModel & model, const FanGridConfig & cfg)
{
  std::vector<ObstaclePoint> out;
  for (const Point3 & p : cloud) {
    const double range = std::hypot(p.x, p.y);
    if (!(range >= cfg.d_min && range <= cfg.d_max)) {
      continue;
    }
    const double g = ground_clearance(p, model, cfg);
    if (g >= cfg.g_low && g <= cfg.g_high) {
      out.push_back({{p.x, p.y}, g});
    }
  }
  return out;
}

std::size_t ObstacleScan::real_count() const
{
  return static_cast<std::size_t>(
    std::count_if(entries.begin(), entries.end(), [](const ScanEntry & e) {
      return !e.is_virtual;
    }));
}

ObstacleScan project_to_scan(std::span<const Point2> obstacles, const FanGridConfig & cfg)
{
  const std::size_t s = cfg.ray_count();
  ObstacleScan scan;
  scan.delta_s = cfg.delta_s;
  scan.entries.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    const double alpha = deg_to_rad(static_cast<double>(i) * cfg.delta_s);
    scan.entries[i] = {{cfg.d_max * std::cos(alpha), cfg.d_max * std::sin(alpha)}, true};
  }

  std::vector<double> best(s, std::numeric_limits<double>::infinity());
  for (const Point2 & p : obstacles) {
    const double range = std::hypot(p.x, p.y);
    if (!(range >= cfg.d_min && range <= cfg.d_max)) {
      continue;
    }
    const double deg = azimuth_deg(std::atan2(p.y, p.x));
    const std::size_t ray = floor_count(deg / cfg.delta_s) % s;
    if (range < best[ray]) {
      best[ray] = range;
      scan.entries[ray] = {p, false};
    }
  }
  return scan;
}

ObstacleScan project_to_scan(std::span<const ObstaclePoint> obstacles, const FanGridConfig & cfg)
{
  std::vector<Point2> points;
  points.reserve(obstacles.size());
  for (const auto & o : obstacles) {
    points.push_back(o.point);
  }
  return project_to_scan(std::span<const Point2>(points), cfg);
}

ObstacleScan segment_cloud(std::span<const Point3> cloud, const FanGridConfig & cfg)
{
  const FanGrid grid = build_fan_grid(cloud, cfg);
  const GroundModel model = fit_ground_lines(grid, cfg);
  const auto obstacles = extract_obstacle_points(cloud, model, cfg);
  return project_to_scan(std::span<const ObstaclePoint>(obstacles), cfg);
}

}  // namespace vecmap
