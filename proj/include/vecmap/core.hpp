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

#ifndef VECMAP__CORE_HPP_
#define VECMAP__CORE_HPP_

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace vecmap
{
/// Point in the sensor / vehicle frame, meters.
struct Point3
{
  double x{0.0};
  double y{0.0};
  double z{0.0};

  bool operator==(const Point3 &) const = default;
};

/// Planar point, meters.
struct Point2
{
  double x{0.0};
  double y{0.0};

  bool operator==(const Point2 &) const = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

/// Wrap an angle into (-pi, pi].
inline double normalize_angle(double theta)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(theta, two_pi);
  if (wrapped <= -std::numbers::pi) {
    wrapped += two_pi;
  } else if (wrapped > std::numbers::pi) {
    wrapped -= two_pi;
  }
  return wrapped;
}

/// Planar vehicle pose. `theta` is kept in (-pi, pi].
struct Pose2
{
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  Pose2() = default;
  Pose2(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Point2 position() const { return {x, y}; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(theta); }
};

inline bool is_finite(const Point3 & p)
{
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

inline bool is_finite(const Point2 & p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct Polar
{
  double range{0.0};
  double angle{0.0};
};

/// Horizontal range and azimuth of a 3D point. The azimuth at the origin is 0.
inline Polar polar_of(const Point3 & p)
{
  const double range = std::hypot(p.x, p.y);
  if (range == 0.0) {
    return {0.0, 0.0};
  }
  return {range, std::atan2(p.y, p.x)};
}

/// Orientation discriminant of c against the directed segment a->b.
/// Positive when c lies to the left, zero when collinear.
inline double signed_side(Point2 a, Point2 b, Point2 c)
{
  return (a.x - c.x) * (b.y - c.y) - (a.y - c.y) * (b.x - c.x);
}

struct LineDistance
{
  double distance{0.0};
  bool is_outer{false};
};

/// Distance from `p` to the infinite line through a and b, plus which side of the boundary
/// it falls on. Boundaries run counter-clockwise, so the exterior is right of a->b.
inline LineDistance point_line_distance_side(Point2 p, Point2 a, Point2 b)
{
  const Point2 ab = b - a;
  const double len = norm(ab);
  if (len == 0.0) {
    throw std::invalid_argument("zero-length chord");
  }
  const double side = signed_side(a, b, p);
  return {std::abs(side) / len, side < 0.0};
}

/// Signed shoelace area; positive for counter-clockwise rings.
inline double signed_area(const std::vector<Point2> & ring)
{
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 & a = ring[i];
    const Point2 & b = ring[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

}  // namespace vecmap

#endif  // VECMAP__CORE_HPP_
