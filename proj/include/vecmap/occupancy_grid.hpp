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

#ifndef VECMAP__OCCUPANCY_GRID_HPP_
#define VECMAP__OCCUPANCY_GRID_HPP_

#include "vecmap/core.hpp"
#include "vecmap/ground_segmentation.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace vecmap
{
struct GridConfig
{
  double resolution{0.1};  // r_m [m/cell]
  std::size_t width{600};
  std::size_t height{600};
  double alpha_hit{0.7};
  double alpha_miss{0.4};
  double l_up{5.0};
  double l_low{-2.0};
  double lambda{10.0};  // forward offset of the map center [m]
  double beta_occ{0.65};
  double beta_free{0.35};

  void validate() const;

  /// Cell updates and clamp bounds live on a 2^-48 lattice, so sums of them are exact (for
  /// |l| < 32) and independent of update order.
  double hit_increment() const;
  double miss_increment() const;
  double upper_bound() const;
  double lower_bound() const;
};

enum class CellState : std::uint8_t { Occupied, Unknown, Free };

struct CellIndex
{
  std::int64_t x{0};
  std::int64_t y{0};

  bool operator==(const CellIndex &) const = default;
  auto operator<=>(const CellIndex &) const = default;
};

/// log(p / (1 - p)); throws std::domain_error outside (0, 1).
double log_odds(double p);

/// Inverse of log_odds.
double prob_of(double l);

/// Map center placed `lambda` meters ahead of the vehicle.
Point2 map_center(const Pose2 & pose, double lambda);

/// Fixed-size rolling log-odds grid.
///
/// Cells live on a lattice anchored at construction time; the window only ever moves by whole
/// cells and never rotates. Cell (0, 0) is the lower-left corner of the window, x grows along the
/// map frame x axis and rows are stored contiguously.
class GridMap
{
public:
  /// Window centered on `center`: the center cell (width/2, height/2) has `center` at its middle.
  GridMap(std::size_t width, std::size_t height, double resolution, Point2 center, double heading);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  double resolution() const { return resolution_; }
  double heading() const { return heading_; }

  /// Last requested metric center; may sit anywhere inside the center cell.
  Point2 center() const { return center_; }
  /// Lattice index of cell (0, 0).
  CellIndex offset() const { return offset_; }

  double & at(std::size_t x, std::size_t y) { return cells_[y * width_ + x]; }
  double at(std::size_t x, std::size_t y) const { return cells_[y * width_ + x]; }
  std::vector<double> & data() { return cells_; }
  const std::vector<double> & data() const { return cells_; }

  /// Metric position of the window's lower-left corner.
  Point2 origin() const;
  Point2 cell_center(std::size_t x, std::size_t y) const;
  /// Window cell containing `p`, or nullopt outside the window.
  std::optional<CellIndex> cell_of(Point2 p) const;
  /// Lattice cell containing `p`; defined everywhere.
  CellIndex lattice_cell_of(Point2 p) const;

  /// Continuous cell coordinates of `p` relative to the window corner.
  Point2 to_cell_coords(Point2 p) const;

  /// Moves the window so its center cell contains `new_center`. Overlapping cells keep their
  /// values bit-exactly, newly exposed cells reset to 0. Returns the applied cell shift.
  CellIndex recenter(Point2 new_center);

private:
  std::size_t width_;
  std::size_t height_;
  double resolution_;
  double heading_;
  Point2 anchor_;
  CellIndex offset_;
  Point2 center_;
  std::vector<double> cells_;
};

/// Functional form of GridMap::recenter.
GridMap recenter(GridMap map, Point2 new_center);

/// 8-connected Bresenham line from `from` to `to`, both inclusive.
std::vector<CellIndex> raycast_cells(CellIndex from, CellIndex to);

/// Applies one pseudo-scan taken at `pose` (map frame) to the grid. Every cell touched by the
/// scan is updated once: a hit if any ray ends in it, otherwise a miss.
void integrate_scan(
  GridMap & map, const ObstacleScan & scan, const Pose2 & pose, const GridConfig & cfg);

CellState classify(double l, const GridConfig & cfg);
std::vector<CellState> classify_cells(const GridMap & map, const GridConfig & cfg);

/// Binary PGM (P5) snapshot: occupied 0, unknown 128, free 255. The top image row is the
/// highest-y grid row.
void write_pgm(std::ostream & out, const GridMap & map, const GridConfig & cfg);

}  // namespace vecmap

#endif  // VECMAP__OCCUPANCY_GRID_HPP_
