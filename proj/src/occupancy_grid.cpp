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

#include "vecmap/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace vecmap
{
namespace
{
void require(bool ok, const char * key, const char * what)
{
  if (!ok) {
    throw std::invalid_argument(std::string(key) + ": " + what);
  }
}

constexpr int kLatticeBits = 48;

std::int64_t floor_to_int(double v) { return static_cast<std::int64_t>(std::floor(v)); }

/// Liang-Barsky clip of the segment a->b against [0, w] x [0, h]. Returns the parameter range.
bool clip_segment(Point2 a, Point2 b, double w, double h, double & t0, double & t1)
{
  t0 = 0.0;
  t1 = 1.0;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x, w - a.x, a.y, h - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) {
        return false;
      }
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
  }
  return t0 <= t1;
}

}  // namespace

void GridConfig::validate() const
{
  require(resolution > 0.0, "resolution", "must be positive");
  require(width > 0, "width", "must be positive");
  require(height > 0, "height", "must be positive");
  require(alpha_hit > 0.5 && alpha_hit < 1.0, "alpha_hit", "0.5 < alpha_hit < 1 required");
  require(alpha_miss > 0.0 && alpha_miss < 0.5, "alpha_miss", "0 < alpha_miss < 0.5 required");
  require(l_up > 0.0, "l_up", "l_up > 0 required");
  require(l_low < 0.0, "l_low", "l_low < 0 required");
  require(beta_free > 0.0, "beta_free", "beta_free > 0 required");
  require(beta_occ < 1.0, "beta_occ", "beta_occ < 1 required");
  require(beta_free < beta_occ, "beta_free", "beta_free < beta_occ required");
}

double GridConfig::hit_increment() const
{
  return std::ldexp(std::round(std::ldexp(log_odds(alpha_hit), kLatticeBits)), -kLatticeBits);
}

double GridConfig::miss_increment() const
{
  return std::ldexp(std::round(std::ldexp(log_odds(alpha_miss), kLatticeBits)), -kLatticeBits);
}

double GridConfig::upper_bound() const
{
  return std::ldexp(std::floor(std::ldexp(l_up, kLatticeBits)), -kLatticeBits);
}

double GridConfig::lower_bound() const
{
  return std::ldexp(std::ceil(std::ldexp(l_low, kLatticeBits)), -kLatticeBits);
}

double log_odds(double p)
{
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("log_odds: probability must lie in (0, 1)");
  }
  return std::log(p / (1.0 - p));
}

double prob_of(double l) { return 1.0 - 1.0 / (1.0 + std::exp(l)); }

Point2 map_center(const Pose2 & pose, double lambda)
{
  return {pose.x + lambda * std::cos(pose.theta), pose.y + lambda * std::sin(pose.theta)};
}

GridMap::GridMap(
  std::size_t width, std::size_t height, double resolution, Point2 center, double heading)
: width_(width),
  height_(height),
  resolution_(resolution),
  heading_(heading),
  anchor_{
    center.x - (static_cast<double>(width / 2) + 0.5) * resolution,
    center.y - (static_cast<double>(height / 2) + 0.5) * resolution},
  offset_{0, 0},
  center_(center),
  cells_(width * height, 0.0)
{
  if (width == 0 || height == 0 || !(resolution > 0.0)) {
    throw std::invalid_argument("GridMap: empty window or non-positive resolution");
  }
}

Point2 GridMap::origin() const
{
  return {
    anchor_.x + static_cast<double>(offset_.x) * resolution_,
    anchor_.y + static_cast<double>(offset_.y) * resolution_};
}

Point2 GridMap::cell_center(std::size_t x, std::size_t y) const
{
  return {
    anchor_.x + (static_cast<double>(offset_.x + static_cast<std::int64_t>(x)) + 0.5) * resolution_,
    anchor_.y +
      (static_cast<double>(offset_.y + static_cast<std::int64_t>(y)) + 0.5) * resolution_};
}

CellIndex GridMap::lattice_cell_of(Point2 p) const
{
  return {
    floor_to_int((p.x - anchor_.x) / resolution_), floor_to_int((p.y - anchor_.y) / resolution_)};
}

std::optional<CellIndex> GridMap::cell_of(Point2 p) const
{
  const CellIndex lattice = lattice_cell_of(p);
  const CellIndex local{lattice.x - offset_.x, lattice.y - offset_.y};
  if (
    local.x < 0 || local.y < 0 || local.x >= static_cast<std::int64_t>(width_) ||
    local.y >= static_cast<std::int64_t>(height_)) {
    return std::nullopt;
  }
  return local;
}

Point2 GridMap::to_cell_coords(Point2 p) const
{
  return {
    (p.x - anchor_.x) / resolution_ - static_cast<double>(offset_.x),
    (p.y - anchor_.y) / resolution_ - static_cast<double>(offset_.y)};
}

CellIndex GridMap::recenter(Point2 new_center)
{
  center_ = new_center;
  const CellIndex target = lattice_cell_of(new_center);
  const std::int64_t w = static_cast<std::int64_t>(width_);
  const std::int64_t h = static_cast<std::int64_t>(height_);
  const CellIndex shift{target.x - (offset_.x + w / 2), target.y - (offset_.y + h / 2)};
  if (shift.x == 0 && shift.y == 0) {
    return shift;
  }

  offset_.x += shift.x;
  offset_.y += shift.y;
  if (std::llabs(shift.x) >= w || std::llabs(shift.y) >= h) {
    std::fill(cells_.begin(), cells_.end(), 0.0);
    return shift;
  }

  std::vector<double> moved(cells_.size(), 0.0);
  // new cell (x, y) takes old cell (x + shift.x, y + shift.y)
  const std::int64_t x_begin = std::max<std::int64_t>(0, -shift.x);
  const std::int64_t x_end = std::min<std::int64_t>(w, w - shift.x);
  for (std::int64_t y = 0; y < h; ++y) {
    const std::int64_t src_y = y + shift.y;
    if (src_y < 0 || src_y >= h) {
      continue;
    }
    const auto src_row = cells_.begin() + src_y * w;
    std::copy(
      src_row + x_begin + shift.x, src_row + x_end + shift.x, moved.begin() + y * w + x_begin);
  }
  cells_ = std::move(moved);
  return shift;
}

GridMap recenter(GridMap map, Point2 new_center)
{
  map.recenter(new_center);
  return map;
}

std::vector<CellIndex> raycast_cells(CellIndex from, CellIndex to)
{
  std::vector<CellIndex> cells;
  const std::int64_t dx = std::llabs(to.x - from.x);
  const std::int64_t dy = std::llabs(to.y - from.y);
  const std::int64_t sx = from.x < to.x ? 1 : -1;
  const std::int64_t sy = from.y < to.y ? 1 : -1;
  cells.reserve(static_cast<std::size_t>(std::max(dx, dy) + 1));

  std::int64_t err = dx - dy;
  CellIndex c = from;
  while (true) {
    cells.push_back(c);
    if (c == to) {
      break;
    }
    const std::int64_t e2 = 2 * err;
    if (e2 > -dy) {
      err -= dy;
      c.x += sx;
    }
    if (e2 < dx) {
      err += dx;
      c.y += sy;
    }
  }
  return cells;
}

void integrate_scan(
  GridMap & map, const ObstacleScan & scan, const Pose2 & pose, const GridConfig & cfg)
{
  if (!pose.finite()) {
    throw std::invalid_argument("integrate_scan: non-finite pose");
  }
  const double hit = cfg.hit_increment();
  const double miss = cfg.miss_increment();
  const double l_low = cfg.lower_bound();
  const double l_up = cfg.upper_bound();
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double w = static_cast<double>(map.width());
  const double h = static_cast<double>(map.height());
  const std::int64_t max_x = static_cast<std::int64_t>(map.width()) - 1;
  const std::int64_t max_y = static_cast<std::int64_t>(map.height()) - 1;
  auto & cells = map.data();

  // each cell takes at most one update per scan; a hit outranks a miss
  constexpr std::uint8_t kMiss = 1;
  constexpr std::uint8_t kHit = 2;
  std::vector<std::uint8_t> marks(cells.size(), 0);
  auto mark = [&](CellIndex idx, std::uint8_t m) {
    auto & slot =
      marks[static_cast<std::size_t>(idx.y) * map.width() + static_cast<std::size_t>(idx.x)];
    slot = std::max(slot, m);
  };
  auto to_cell = [&](Point2 u) {
    return CellIndex{
      std::clamp<std::int64_t>(floor_to_int(u.x), 0, max_x),
      std::clamp<std::int64_t>(floor_to_int(u.y), 0, max_y)};
  };

  const Point2 origin = map.to_cell_coords(pose.position());
  for (const ScanEntry & entry : scan.entries) {
    const Point2 world{
      pose.x + c * entry.point.x - s * entry.point.y,
      pose.y + s * entry.point.x + c * entry.point.y};
    const Point2 end = map.to_cell_coords(world);

    double t0 = 0.0;
    double t1 = 1.0;
    if (!clip_segment(origin, end, w, h, t0, t1)) {
      continue;
    }
    const bool end_inside = t1 == 1.0 && end.x < w && end.y < h;
    const Point2 delta = end - origin;
    const CellIndex from = to_cell(origin + t0 * delta);
    const CellIndex to = to_cell(origin + t1 * delta);

    const auto ray = raycast_cells(from, to);
    for (std::size_t i = 0; i + 1 < ray.size(); ++i) {
      mark(ray[i], kMiss);
    }
    mark(ray.back(), end_inside && !entry.is_virtual ? kHit : kMiss);
  }

  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (marks[i] != 0) {
      cells[i] = std::clamp(cells[i] + (marks[i] == kHit ? hit : miss), l_low, l_up);
    }
  }
}

CellState classify(double l, const GridConfig & cfg)
{
  const double p = prob_of(l);
  if (p >= cfg.beta_occ) {
    return CellState::Occupied;
  }
  if (p >= cfg.beta_free) {
    return CellState::Unknown;
  }
  return CellState::Free;
}

std::vector<CellState> classify_cells(const GridMap & map, const GridConfig & cfg)
{
  std::vector<CellState> states;
  states.reserve(map.data().size());
  for (double l : map.data()) {
    states.push_back(classify(l, cfg));
  }
  return states;
}

void write_pgm(std::ostream & out, const GridMap & map, const GridConfig & cfg)
{
  out << "P5\n" << map.width() << ' ' << map.height() << "\n255\n";
  std::vector<char> row(map.width());
  for (std::size_t y = map.height(); y-- > 0;) {
    for (std::size_t x = 0; x < map.width(); ++x) {
      switch (classify(map.at(x, y), cfg)) {
        case CellState::Occupied:
          row[x] = 0;
          break;
        case CellState::Unknown:
          row[x] = static_cast<char>(128);
          break;
        case CellState::Free:
          row[x] = static_cast<char>(255);
          break;
      }
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

}  // namespace vecmap
