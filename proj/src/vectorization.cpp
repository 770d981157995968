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

#include "vecmap/vectorization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <utility>

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

struct Pixel
{
  std::int64_t x;
  std::int64_t y;

  bool operator==(const Pixel &) const = default;
  auto operator<=>(const Pixel &) const = default;
};

// Clockwise when y grows downward (raster order), starting east.
constexpr std::array<Pixel, 8> kNeighbors{
  {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
constexpr std::size_t kWest = 4;

std::size_t direction_of(Pixel from, Pixel to)
{
  const Pixel d{to.x - from.x, to.y - from.y};
  for (std::size_t k = 0; k < kNeighbors.size(); ++k) {
    if (kNeighbors[k] == d) {
      return k;
    }
  }
  throw std::logic_error("direction_of: pixels are not 8-adjacent");
}

/// Suzuki-Abe outer border following from `start`, whose west neighbor is background.
std::vector<Pixel> follow_outer_border(const BinaryImage & img, Pixel start)
{
  auto fg = [&](Pixel p) { return img.get_or(p.x, p.y, false); };
  auto step = [](Pixel p, std::size_t dir) {
    return Pixel{p.x + kNeighbors[dir].x, p.y + kNeighbors[dir].y};
  };

  std::vector<Pixel> border;
  // 3.1: clockwise search from the west neighbor
  std::optional<Pixel> first;
  for (std::size_t k = 0; k < 8; ++k) {
    const Pixel q = step(start, (kWest + k) % 8);
    if (fg(q)) {
      first = q;
      break;
    }
  }
  if (!first) {
    border.push_back(start);
    return border;
  }

  Pixel prev = *first;
  Pixel cur = start;
  while (true) {
    border.push_back(cur);
    // 3.3: counter-clockwise search starting just after `prev`
    const std::size_t back = direction_of(cur, prev);
    Pixel next = prev;
    for (std::size_t k = 1; k <= 8; ++k) {
      const Pixel q = step(cur, (back + 8 - k) % 8);
      if (fg(q)) {
        next = q;
        break;
      }
    }
    if (next == start && cur == *first) {
      break;
    }
    prev = cur;
    cur = next;
  }
  return border;
}

/// Breaks a border that revisits pixels into loops that do not.
std::vector<std::vector<Pixel>> split_pinched(const std::vector<Pixel> & border)
{
  std::vector<std::vector<Pixel>> loops;
  std::vector<Pixel> stack;
  std::map<Pixel, std::size_t> position;
  for (const Pixel & p : border) {
    const auto it = position.find(p);
    if (it == position.end()) {
      position.emplace(p, stack.size());
      stack.push_back(p);
      continue;
    }
    const std::size_t at = it->second;
    loops.emplace_back(stack.begin() + static_cast<std::ptrdiff_t>(at), stack.end());
    for (std::size_t i = at + 1; i < stack.size(); ++i) {
      position.erase(stack[i]);
    }
    stack.resize(at + 1);
  }
  loops.push_back(std::move(stack));
  return loops;
}

double turn_tolerance(Point2 a, Point2 b, Point2 c) { return 1e-12 * norm(b - a) * norm(c - b); }

/// Drops repeated vertices and vertices whose neighbours are collinear with them.
std::vector<Point2> clean_ring(std::vector<Point2> ring)
{
  bool changed = true;
  while (changed && ring.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < ring.size() && ring.size() >= 3; ++i) {
      const std::size_t n = ring.size();
      const Point2 a = ring[(i + n - 1) % n];
      const Point2 b = ring[i];
      const Point2 c = ring[(i + 1) % n];
      const bool duplicate = norm(b - a) <= 1e-12 || norm(c - b) <= 1e-12;
      if (duplicate || std::abs(signed_side(a, b, c)) <= turn_tolerance(a, b, c)) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        --i;
      }
    }
  }
  if (ring.size() < 3) {
    ring.clear();
  }
  return ring;
}

int orientation(Point2 a, Point2 b, Point2 c)
{
  const double v = signed_side(a, b, c);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Point2 a, Point2 b, Point2 p)
{
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d)
{
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) {
    return true;
  }
  return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
         (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
}

Polygon make_polygon(std::vector<Point2> vertices)
{
  Polygon poly;
  poly.convex = is_convex(vertices);
  poly.vertices = std::move(vertices);
  return poly;
}

}  // namespace

void VectorizationConfig::validate() const
{
  require(delta_ou > 0.0, "delta_ou", "must be positive");
  require(delta_ou < delta_in, "delta_ou", "delta_ou < delta_in required");
  require(k_min >= 3, "k_min", "k_min >= 3 required");
  require(submap_w > 0, "submap_w", "must be positive");
  require(submap_h > 0, "submap_h", "must be positive");
}

void VectorizationConfig::validate(const GridConfig & grid) const
{
  validate();
  require(submap_w <= grid.width, "submap_w", "submap must fit inside the grid");
  require(submap_h <= grid.height, "submap_h", "submap must fit inside the grid");
}

BinaryImage::BinaryImage(std::size_t width, std::size_t height, Point2 origin, double resolution)
: width_(width), height_(height), origin_(origin), resolution_(resolution), bits_(width * height, 0)
{
}

bool BinaryImage::get_or(std::int64_t x, std::int64_t y, bool outside) const
{
  if (
    x < 0 || y < 0 || x >= static_cast<std::int64_t>(width_) ||
    y >= static_cast<std::int64_t>(height_)) {
    return outside;
  }
  return get(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
}

Point2 BinaryImage::pixel_center(std::size_t x, std::size_t y) const
{
  return {
    origin_.x + (static_cast<double>(x) + 0.5) * resolution_,
    origin_.y + (static_cast<double>(y) + 0.5) * resolution_};
}

std::size_t BinaryImage::count() const
{
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryImage binarize_submap(
  const GridMap & map, const GridConfig & cfg_g, const VectorizationConfig & cfg_v)
{
  const std::size_t sw = std::min(cfg_v.submap_w, map.width());
  const std::size_t sh = std::min(cfg_v.submap_h, map.height());
  const std::size_t x0 = map.width() / 2 - std::min(map.width() / 2, sw / 2);
  const std::size_t y0 = map.height() / 2 - std::min(map.height() / 2, sh / 2);
  const Point2 corner = map.origin();
  const double r = map.resolution();

  BinaryImage img(
    sw, sh, {corner.x + static_cast<double>(x0) * r, corner.y + static_cast<double>(y0) * r}, r);
  for (std::size_t y = 0; y < sh; ++y) {
    for (std::size_t x = 0; x < sw; ++x) {
      if (classify(map.at(x0 + x, y0 + y), cfg_g) == CellState::Occupied) {
        img.set(x, y);
      }
    }
  }
  return img;
}

namespace
{
/// Separable square min/max filter; `outside` is the value assumed beyond the border.
BinaryImage square_filter(const BinaryImage & img, std::size_t kernel, bool take_max)
{
  if (kernel == 0) {
    return img;
  }
  const bool outside = !take_max;
  const auto k = static_cast<std::int64_t>(kernel);
  const auto w = static_cast<std::int64_t>(img.width());
  const auto h = static_cast<std::int64_t>(img.height());

  auto pass = [&](const BinaryImage & src, bool horizontal) {
    BinaryImage dst(img.width(), img.height(), img.origin(), img.resolution());
    for (std::int64_t y = 0; y < h; ++y) {
      for (std::int64_t x = 0; x < w; ++x) {
        bool v = !take_max;
        for (std::int64_t d = -k; d <= k; ++d) {
          const bool s = horizontal ? src.get_or(x + d, y, outside) : src.get_or(x, y + d, outside);
          if (s == take_max) {
            v = take_max;
            break;
          }
        }
        if (v) {
          dst.set(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
        }
      }
    }
    return dst;
  };
  return pass(pass(img, true), false);
}
}  // namespace

BinaryImage dilate(const BinaryImage & img, std::size_t kernel)
{
  return square_filter(img, kernel, true);
}

BinaryImage erode(const BinaryImage & img, std::size_t kernel)
{
  return square_filter(img, kernel, false);
}

BinaryImage morph_close(const BinaryImage & img, std::size_t kernel)
{
  return erode(dilate(img, kernel), kernel);
}

std::vector<Boundary> trace_boundaries(const BinaryImage & img)
{
  std::vector<Boundary> boundaries;
  std::vector<std::uint8_t> visited(img.width() * img.height(), 0);
  std::vector<Pixel> queue;
  const auto w = static_cast<std::int64_t>(img.width());
  const auto h = static_cast<std::int64_t>(img.height());
  const double min_area = 0.25 * img.resolution() * img.resolution();

  for (std::int64_t y = 0; y < h; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      const auto flat = static_cast<std::size_t>(y * w + x);
      if (visited[flat] || !img.get_or(x, y, false)) {
        continue;
      }
      // first raster pixel of a new component: its west neighbour is background
      const auto border = follow_outer_border(img, {x, y});

      // mark the whole 8-connected component so it is traced once
      queue.assign(1, Pixel{x, y});
      visited[flat] = 1;
      while (!queue.empty()) {
        const Pixel p = queue.back();
        queue.pop_back();
        for (const Pixel & d : kNeighbors) {
          const Pixel q{p.x + d.x, p.y + d.y};
          if (!img.get_or(q.x, q.y, false)) {
            continue;
          }
          auto & seen = visited[static_cast<std::size_t>(q.y * w + q.x)];
          if (!seen) {
            seen = 1;
            queue.push_back(q);
          }
        }
      }

      for (const auto & loop : split_pinched(border)) {
        if (loop.size() < 3) {
          continue;
        }
        Boundary b;
        b.points.reserve(loop.size());
        for (const Pixel & p : loop) {
          b.points.push_back(
            img.pixel_center(static_cast<std::size_t>(p.x), static_cast<std::size_t>(p.y)));
        }
        const double area = signed_area(b.points);
        if (std::abs(area) < min_area) {
          continue;
        }
        if (area < 0.0) {
          std::reverse(b.points.begin() + 1, b.points.end());
        }
        boundaries.push_back(std::move(b));
      }
    }
  }
  return boundaries;
}

std::vector<std::size_t> simplify_chain(
  std::span<const Point2> chain, double delta_in, double delta_ou)
{
  const std::size_t n = chain.size();
  if (n <= 2) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) {
      all[i] = i;
    }
    return all;
  }

  std::vector<std::size_t> retained{0, n - 1};
  std::deque<std::pair<std::size_t, std::size_t>> queue{{0, n - 1}};
  while (!queue.empty()) {
    const auto [start, end] = queue.front();
    queue.pop_front();
    if (norm(chain[end] - chain[start]) == 0.0) {
      continue;
    }

    double d_in = 0.0;
    double d_ou = 0.0;
    std::size_t i_in = start;
    std::size_t i_ou = start;
    for (std::size_t j = start + 1; j < end; ++j) {
      const LineDistance ld = point_line_distance_side(chain[j], chain[start], chain[end]);
      if (ld.is_outer && ld.distance > d_ou) {
        d_ou = ld.distance;
        i_ou = j;
      } else if (!ld.is_outer && ld.distance > d_in) {
        d_in = ld.distance;
        i_in = j;
      }
    }

    // inner branch is tested first
    if (d_in > delta_in) {
      queue.emplace_back(start, i_in);
      queue.emplace_back(i_in, end);
      retained.push_back(i_in);
    } else if (d_ou > delta_ou) {
      queue.emplace_back(start, i_ou);
      queue.emplace_back(i_ou, end);
      retained.push_back(i_ou);
    }
  }
  std::sort(retained.begin(), retained.end());
  return retained;
}

std::pair<std::size_t, std::size_t> farthest_pair(std::span<const Point2> points)
{
  std::pair<std::size_t, std::size_t> best{0, points.size() > 1 ? 1 : 0};
  double best_d2 = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const Point2 d = points[j] - points[i];
      const double d2 = dot(d, d);
      if (d2 > best_d2) {
        best_d2 = d2;
        best = {i, j};
      }
    }
  }
  return best;
}

Polygon simplify(const Boundary & boundary, const VectorizationConfig & cfg)
{
  const auto & pts = boundary.points;
  const std::size_t n = pts.size();
  if (n < cfg.k_min || n < 3) {
    return make_polygon(pts);
  }

  const auto [a, b] = farthest_pair(pts);
  // chain one runs a..b, chain two runs b..n-1, 0..a
  std::vector<Point2> first(pts.begin() + static_cast<std::ptrdiff_t>(a),
                            pts.begin() + static_cast<std::ptrdiff_t>(b) + 1);
  std::vector<Point2> second;
  std::vector<std::size_t> second_index;
  for (std::size_t k = b; k != a; k = (k + 1) % n) {
    second.push_back(pts[k]);
    second_index.push_back(k);
  }
  second.push_back(pts[a]);
  second_index.push_back(a);

  std::vector<std::size_t> keep;
  for (std::size_t i : simplify_chain(first, cfg.delta_in, cfg.delta_ou)) {
    keep.push_back(a + i);
  }
  for (std::size_t i : simplify_chain(second, cfg.delta_in, cfg.delta_ou)) {
    keep.push_back(second_index[i]);
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

  std::vector<Point2> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) {
    out.push_back(pts[i]);
  }
  return make_polygon(std::move(out));
}

bool is_simple(std::span<const Point2> ring)
{
  const std::size_t n = ring.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (ring[i] == ring[j]) {
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i];
    const Point2 b = ring[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Point2 c = ring[j];
      const Point2 d = ring[(j + 1) % n];
      if (adjacent) {
        // neighbours may only share their common vertex
        const Point2 shared = j == i + 1 ? b : a;
        const Point2 other = j == i + 1 ? d : c;
        const Point2 mine = j == i + 1 ? a : b;
        if (orientation(mine, shared, other) == 0 && dot(other - shared, mine - shared) > 0.0) {
          return false;
        }
        continue;
      }
      if (segments_touch(a, b, c, d)) {
        return false;
      }
    }
  }
  return true;
}

bool is_convex(std::span<const Point2> ring)
{
  const std::size_t n = ring.size();
  if (n < 3) {
    return false;
  }
  bool any_turn = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[(i + n - 1) % n];
    const Point2 b = ring[i];
    const Point2 c = ring[(i + 1) % n];
    const double side = signed_side(a, b, c);
    if (side < -turn_tolerance(a, b, c)) {
      return false;
    }
    any_turn = any_turn || side > 0.0;
  }
  return any_turn;
}

std::vector<std::size_t> sunken_vertices(const Polygon & poly)
{
  const auto & v = poly.vertices;
  if (!is_simple(v)) {
    throw NonSimplePolygon();
  }
  std::vector<std::size_t> reflex;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = v[(i + n - 1) % n];
    const Point2 b = v[i];
    const Point2 c = v[(i + 1) % n];
    // counter-clockwise ring: a right turn opens an interior angle above 180 degrees
    if (signed_side(a, b, c) < -turn_tolerance(a, b, c)) {
      reflex.push_back(i);
    }
  }
  return reflex;
}

namespace
{
struct RayHit
{
  double t{std::numeric_limits<double>::infinity()};
  std::size_t edge{0};
  double u{0.0};
};

/// First crossing of the ray origin + t * dir (t > 0) with any edge not incident to `skip`.
std::optional<RayHit> cast_from_vertex(
  const std::vector<Point2> & ring, std::size_t skip, Point2 dir)
{
  const std::size_t n = ring.size();
  const Point2 origin = ring[skip];
  const double dir_len = norm(dir);
  std::optional<RayHit> best;
  for (std::size_t e = 0; e < n; ++e) {
    const std::size_t f = (e + 1) % n;
    if (e == skip || f == skip) {
      continue;
    }
    const Point2 a = ring[e];
    const Point2 edge = ring[f] - a;
    const double denom = cross(dir, edge);
    if (std::abs(denom) <= 1e-15 * dir_len * norm(edge)) {
      continue;
    }
    const Point2 rel = a - origin;
    const double t = cross(rel, edge) / denom;
    const double u = cross(rel, dir) / denom;
    if (t * dir_len <= 1e-9 || u < -1e-9 || u > 1.0 + 1e-9) {
      continue;
    }
    if (!best || t < best->t - 1e-12) {
      best = RayHit{t, e, std::clamp(u, 0.0, 1.0)};
    }
  }
  return best;
}

std::vector<Point2> cyclic_range(const std::vector<Point2> & ring, std::size_t from, std::size_t to)
{
  std::vector<Point2> out;
  const std::size_t n = ring.size();
  for (std::size_t k = from;; k = (k + 1) % n) {
    out.push_back(ring[k]);
    if (k == to) {
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<Polygon> decompose(const Polygon & poly, double min_area)
{
  std::vector<Polygon> pieces;
  std::vector<std::vector<Point2>> work{clean_ring(poly.vertices)};
  if (!work.front().empty() && !is_simple(work.front())) {
    throw NonSimplePolygon();
  }
  std::size_t budget = 8 * poly.vertices.size() + 16;

  while (!work.empty()) {
    std::vector<Point2> ring = std::move(work.back());
    work.pop_back();
    if (ring.size() < 3) {
      continue;
    }
    const std::size_t n = ring.size();

    std::vector<bool> reflex(n, false);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 a = ring[(i + n - 1) % n];
      const Point2 c = ring[(i + 1) % n];
      reflex[i] = signed_side(a, ring[i], c) < -turn_tolerance(a, ring[i], c);
      any = any || reflex[i];
    }
    if (!any) {
      const double area = signed_area(ring);
      if (area > 0.0 && area >= min_area) {
        pieces.push_back(make_polygon(std::move(ring)));
      }
      continue;
    }
    if (budget-- == 0) {
      throw DecompositionFailure();
    }

    // first vertex of the first reflex run, in index order
    std::size_t r = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (reflex[i] && !reflex[(i + n - 1) % n]) {
        r = i;
        break;
      }
    }
    if (r == n) {
      throw DecompositionFailure();
    }

    const Point2 dir = ring[r] - ring[(r + n - 1) % n];
    const auto hit = cast_from_vertex(ring, r, dir);
    if (!hit) {
      throw DecompositionFailure();
    }
    const std::size_t e = hit->edge;
    const std::size_t f = (e + 1) % n;
    const double edge_len = norm(ring[f] - ring[e]);

    std::vector<Point2> left;
    std::vector<Point2> right;
    if (hit->u * edge_len <= 1e-9 || (1.0 - hit->u) * edge_len <= 1e-9) {
      const std::size_t v = hit->u * edge_len <= 1e-9 ? e : f;
      left = cyclic_range(ring, r, v);
      right = cyclic_range(ring, v, r);
    } else {
      const Point2 cut = ring[e] + hit->u * (ring[f] - ring[e]);
      left = cyclic_range(ring, r, e);
      left.push_back(cut);
      right = cyclic_range(ring, f, r);
      right.insert(right.begin(), cut);
    }
    work.push_back(clean_ring(std::move(right)));
    work.push_back(clean_ring(std::move(left)));
  }
  return pieces;
}

VectorizationResult vectorize(
  const GridMap & map, const GridConfig & cfg_g, const VectorizationConfig & cfg_v)
{
  VectorizationResult result;
  const BinaryImage raw = binarize_submap(map, cfg_g, cfg_v);
  result.occupied_cells = raw.count();
  BinaryImage img = morph_close(raw, cfg_v.morph_kernel);
  if (cfg_v.morph_dilate > 0) {
    img = dilate(img, cfg_v.morph_dilate);
  }
  result.boundaries = trace_boundaries(img);

  const double min_area = map.resolution() * map.resolution();
  VectorizationConfig symmetric = cfg_v;
  symmetric.delta_in = cfg_v.delta_ou;

  for (const Boundary & boundary : result.boundaries) {
    result.boundary_vertices += boundary.points.size();

    // simplified ring first, then a tighter ring, then the raw border
    const std::array<Polygon, 3> candidates{
      simplify(boundary, cfg_v), simplify(boundary, symmetric),
      make_polygon(boundary.points)};
    bool done = false;
    for (std::size_t c = 0; c < candidates.size() && !done; ++c) {
      const auto cleaned = clean_ring(candidates[c].vertices);
      if (cleaned.size() < 3 || signed_area(cleaned) <= 0.0 || !is_simple(cleaned)) {
        continue;
      }
      try {
        auto pieces = decompose(candidates[c], min_area);
        result.simplified.push_back(candidates[c]);
        for (auto & piece : pieces) {
          result.polygon_vertices += piece.vertices.size();
          result.polygons.push_back(std::move(piece));
        }
        result.fallbacks += c > 0 ? 1 : 0;
        done = true;
      } catch (const std::runtime_error &) {
      }
    }
    if (!done) {
      ++result.fallbacks;
    }
  }
  return result;
}

}  // namespace vecmap
