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

#ifndef VECMAP__VECTORIZATION_HPP_
#define VECMAP__VECTORIZATION_HPP_

#include "vecmap/core.hpp"
#include "vecmap/occupancy_grid.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace vecmap
{
struct VectorizationConfig
{
  std::size_t submap_w{400};
  std::size_t submap_h{400};
  double delta_in{0.30};
  double delta_ou{0.10};
  std::size_t k_min{8};
  std::size_t morph_kernel{1};
  /// Extra dilation after closing; thickens one-cell-wide walls so they trace to polygons with
  /// area. 0 disables.
  std::size_t morph_dilate{1};

  void validate() const;
  /// Also checks that the submap fits inside the grid window.
  void validate(const GridConfig & grid) const;
};

/// Binary raster with a metric anchor. Pixel (x, y) covers
/// [origin + (x, y) * resolution, origin + (x + 1, y + 1) * resolution).
class BinaryImage
{
public:
  BinaryImage() = default;
  BinaryImage(std::size_t width, std::size_t height, Point2 origin = {}, double resolution = 1.0);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  Point2 origin() const { return origin_; }
  double resolution() const { return resolution_; }

  bool get(std::size_t x, std::size_t y) const { return bits_[y * width_ + x] != 0; }
  void set(std::size_t x, std::size_t y, bool v = true) { bits_[y * width_ + x] = v ? 1 : 0; }
  /// Out-of-range reads return `outside`.
  bool get_or(std::int64_t x, std::int64_t y, bool outside) const;

  Point2 pixel_center(std::size_t x, std::size_t y) const;
  std::size_t count() const;

  bool operator==(const BinaryImage & other) const { return bits_ == other.bits_; }

private:
  std::size_t width_{0};
  std::size_t height_{0};
  Point2 origin_{};
  double resolution_{1.0};
  std::vector<std::uint8_t> bits_;
};

/// Closed counter-clockwise ring of pixel centers; the closing edge is implicit.
struct Boundary
{
  std::vector<Point2> points;
};

struct Polygon
{
  std::vector<Point2> vertices;
  bool convex{false};
};

class NonSimplePolygon : public std::runtime_error
{
public:
  NonSimplePolygon() : std::runtime_error("non-simple polygon") {}
};

class DecompositionFailure : public std::runtime_error
{
public:
  DecompositionFailure() : std::runtime_error("decomposition failure") {}
};

/// Occupied cells of the central submap.
BinaryImage binarize_submap(
  const GridMap & map, const GridConfig & cfg_g, const VectorizationConfig & cfg_v);

/// Square structuring element of side 2 * kernel + 1.
BinaryImage dilate(const BinaryImage & img, std::size_t kernel);
BinaryImage erode(const BinaryImage & img, std::size_t kernel);
BinaryImage morph_close(const BinaryImage & img, std::size_t kernel);

/// Outer border of every 8-connected component, pixel centers, counter-clockwise.
/// Borders that pinch through a pixel are split there; zero-area pieces are dropped.
std::vector<Boundary> trace_boundaries(const BinaryImage & img);

/// Double-threshold split of an open chain. Returns the retained positions (sorted, always
/// including both ends).
std::vector<std::size_t> simplify_chain(
  std::span<const Point2> chain, double delta_in, double delta_ou);

/// Indices (i < j) of the two mutually farthest points; lowest indices win ties.
std::pair<std::size_t, std::size_t> farthest_pair(std::span<const Point2> points);

/// Double-threshold simplification of a closed boundary. Output vertices are a subset of the
/// input, in the same cyclic order.
Polygon simplify(const Boundary & boundary, const VectorizationConfig & cfg);

bool is_simple(std::span<const Point2> ring);
bool is_convex(std::span<const Point2> ring);

/// Reflex vertex indices of a simple counter-clockwise ring. Throws NonSimplePolygon.
std::vector<std::size_t> sunken_vertices(const Polygon & poly);

/// Splits a simple counter-clockwise polygon into convex pieces by extending the edge entering
/// each reflex run. Pieces with area below `min_area` are dropped.
std::vector<Polygon> decompose(const Polygon & poly, double min_area = 0.0);

struct VectorizationResult
{
  std::vector<Boundary> boundaries;
  std::vector<Polygon> simplified;
  std::vector<Polygon> polygons;
  std::size_t occupied_cells{0};
  std::size_t boundary_vertices{0};
  std::size_t polygon_vertices{0};
  /// Boundaries whose simplified ring was non-simple or failed to decompose.
  std::size_t fallbacks{0};
};

/// Submap crop through convex decomposition.
VectorizationResult vectorize(
  const GridMap & map, const GridConfig & cfg_g, const VectorizationConfig & cfg_v);

}  // namespace vecmap

#endif  // VECMAP__VECTORIZATION_HPP_
