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

#include "vecmap/scan_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace vecmap::sim
{
namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ray
{
  Point3 origin;
  Point3 dir;
};

/// Intersection with z = h0 + slope * (x - x0) restricted to x in [x_lo, x_hi].
double hit_ground_piece(const Ray & ray, double x0, double h0, double slope, double x_lo, double x_hi)
{
  const double denom = ray.dir.z - slope * ray.dir.x;
  if (denom == 0.0) {
    return kInf;
  }
  const double t = (h0 + slope * (ray.origin.x - x0) - ray.origin.z) / denom;
  if (!(t > 0.0)) {
    return kInf;
  }
  const double x = ray.origin.x + t * ray.dir.x;
  if (x < x_lo || x > x_hi) {
    return kInf;
  }
  return t;
}

double hit_ground(const Ray & ray, const GroundProfile & ground)
{
  const auto & k = ground.knots;
  if (k.empty()) {
    return hit_ground_piece(ray, 0.0, 0.0, 0.0, -kInf, kInf);
  }
  double best = hit_ground_piece(ray, k.front().x, k.front().y, 0.0, -kInf, k.front().x);
  best = std::min(best, hit_ground_piece(ray, k.back().x, k.back().y, 0.0, k.back().x, kInf));
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const double slope = (k[i + 1].y - k[i].y) / (k[i + 1].x - k[i].x);
    best = std::min(best, hit_ground_piece(ray, k[i].x, k[i].y, slope, k[i].x, k[i + 1].x));
  }
  return best;
}

double hit_box(const Ray & ray, const Box & box)
{
  const double o[3] = {ray.origin.x, ray.origin.y, ray.origin.z};
  const double d[3] = {ray.dir.x, ray.dir.y, ray.dir.z};
  const double c[3] = {box.center.x, box.center.y, box.center.z};
  const double e[3] = {box.extent.x / 2, box.extent.y / 2, box.extent.z / 2};
  double t_near = -kInf;
  double t_far = kInf;
  for (int a = 0; a < 3; ++a) {
    const double lo = c[a] - e[a];
    const double hi = c[a] + e[a];
    if (d[a] == 0.0) {
      if (o[a] < lo || o[a] > hi) {
        return kInf;
      }
      continue;
    }
    double t1 = (lo - o[a]) / d[a];
    double t2 = (hi - o[a]) / d[a];
    if (t1 > t2) {
      std::swap(t1, t2);
    }
    t_near = std::max(t_near, t1);
    t_far = std::min(t_far, t2);
  }
  if (t_near > t_far || t_near <= 0.0) {
    return kInf;
  }
  return t_near;
}

}  // namespace

double GroundProfile::height_at(double x) const
{
  if (knots.empty()) {
    return 0.0;
  }
  if (x <= knots.front().x) {
    return knots.front().y;
  }
  if (x >= knots.back().x) {
    return knots.back().y;
  }
  const auto it = std::upper_bound(
    knots.begin(), knots.end(), x, [](double v, const Point2 & k) { return v < k.x; });
  const Point2 & hi = *it;
  const Point2 & lo = *std::prev(it);
  return lo.y + (hi.y - lo.y) * (x - lo.x) / (hi.x - lo.x);
}

void Scene::validate() const
{
  for (std::size_t i = 1; i < ground.knots.size(); ++i) {
    if (!(ground.knots[i].x > ground.knots[i - 1].x)) {
      throw std::invalid_argument("ground: knot x values must increase");
    }
  }
  for (const Box & b : boxes) {
    if (!(b.extent.x > 0.0 && b.extent.y > 0.0 && b.extent.z > 0.0)) {
      throw std::invalid_argument("box: extents must be positive");
    }
    const double bottom = b.center.z - b.extent.z / 2;
    const double lo_x = b.center.x - b.extent.x / 2;
    const double hi_x = b.center.x + b.extent.x / 2;
    const double ground_low = std::min(ground.height_at(lo_x), ground.height_at(hi_x));
    if (bottom < ground_low - 1e-9) {
      throw std::invalid_argument("box: must stand above the ground");
    }
  }
}

LidarModel LidarModel::uniform(std::size_t beams, double lowest_deg, double highest_deg)
{
  LidarModel model;
  model.vertical_angles.resize(beams);
  for (std::size_t i = 0; i < beams; ++i) {
    const double f = beams == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(beams - 1);
    model.vertical_angles[i] = deg_to_rad(lowest_deg + f * (highest_deg - lowest_deg));
  }
  return model;
}

LidarModel LidarModel::default_model() { return uniform(40, -25.0, 15.0); }

std::vector<Point3> simulate_scan(
  const Scene & scene, const Pose2 & pose, const LidarModel & model, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, model.range_noise_sigma);
  const bool noisy = model.range_noise_sigma > 0.0;

  const Point3 origin{pose.x, pose.y, scene.ground.height_at(pose.x) + model.sensor_height};
  const auto steps = static_cast<std::size_t>(std::floor(360.0 / model.delta_s + 1e-9));
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);

  std::vector<Point3> cloud;
  cloud.reserve(model.vertical_angles.size() * steps);
  for (double elevation : model.vertical_angles) {
    const double ce = std::cos(elevation);
    const double se = std::sin(elevation);
    for (std::size_t i = 0; i < steps; ++i) {
      const double azimuth = deg_to_rad((static_cast<double>(i) + 0.5) * model.delta_s);
      const Point3 local{ce * std::cos(azimuth), ce * std::sin(azimuth), se};
      const Ray ray{origin, {c * local.x - s * local.y, s * local.x + c * local.y, local.z}};

      double t = hit_ground(ray, scene.ground);
      for (const Box & box : scene.boxes) {
        t = std::min(t, hit_box(ray, box));
      }
      if (!(t <= model.max_range)) {
        continue;
      }
      if (noisy) {
        t = std::clamp(t + noise(rng), 0.0, model.max_range);
      }
      // sensor frame: direction in the sensor's own axes
      cloud.push_back({t * local.x, t * local.y, t * local.z});
    }
  }
  return cloud;
}

std::vector<Polygon> footprint_oracle(const Scene & scene)
{
  std::vector<Polygon> out;
  for (const Box & b : scene.boxes) {
    const double x0 = b.center.x - b.extent.x / 2;
    const double x1 = b.center.x + b.extent.x / 2;
    const double y0 = b.center.y - b.extent.y / 2;
    const double y1 = b.center.y + b.extent.y / 2;
    out.push_back({{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, true});
  }
  return out;
}

std::vector<TimedPose> make_trajectory(
  TrajectoryKind kind, double length, double step, double radius)
{
  if (!(step > 0.0)) {
    throw std::invalid_argument("make_trajectory: step must be positive");
  }
  if (!(length >= 0.0)) {
    throw std::invalid_argument("make_trajectory: length must be non-negative");
  }
  std::vector<double> arc;
  const auto full = static_cast<std::size_t>(std::floor(length / step + 1e-9));
  for (std::size_t i = 0; i <= full; ++i) {
    arc.push_back(static_cast<double>(i) * step);
  }
  if (length - arc.back() > 1e-9) {
    arc.push_back(length);
  }

  std::vector<TimedPose> poses;
  for (std::size_t i = 0; i < arc.size(); ++i) {
    const double t = 0.1 * static_cast<double>(i);
    const double s = arc[i];
    if (kind == TrajectoryKind::Straight) {
      poses.push_back({t, Pose2(s, 0.0, 0.0)});
    } else {
      const double heading = s / radius;
      poses.push_back(
        {t, Pose2(radius * std::sin(heading), radius * (1.0 - std::cos(heading)), heading)});
    }
  }
  return poses;
}

Scene parse_scene(std::istream & in)
{
  Scene scene;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ss(line);
    std::string kind;
    if (!(ss >> kind)) {
      continue;
    }
    auto fail = [&](const std::string & what) {
      throw std::runtime_error("scene line " + std::to_string(line_no) + ": " + what);
    };
    if (kind == "ground") {
      double x = 0.0;
      double h = 0.0;
      while (ss >> x) {
        if (!(ss >> h)) {
          fail("ground expects x h pairs");
        }
        scene.ground.knots.push_back({x, h});
      }
      if (!ss.eof()) {
        fail("unparseable ground value");
      }
    } else if (kind == "box") {
      Box b;
      if (!(ss >> b.center.x >> b.center.y >> b.center.z >> b.extent.x >> b.extent.y >>
            b.extent.z)) {
        fail("box expects cx cy cz ex ey ez");
      }
      scene.boxes.push_back(b);
    } else {
      fail("unknown entry '" + kind + "'");
    }
  }
  scene.validate();
  return scene;
}

Scene load_scene(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scene file " + path);
  }
  return parse_scene(in);
}

std::optional<Scene> builtin_scene(const std::string & name)
{
  Scene scene;
  if (name == "empty") {
    return scene;
  }
  if (name == "box") {
    // 2 x 2 m box, 1.5 m tall, 5 m left of a straight 10 m drive
    scene.boxes.push_back({{5.0, 5.0, 0.75}, {2.0, 2.0, 1.5}});
    return scene;
  }
  if (name == "ramp") {
    scene.ground.knots = {{10.0, 0.0}, {30.0, 2.0}};
    scene.boxes.push_back({{20.0, -6.0, 1.9}, {2.0, 3.0, 2.0}});
    return scene;
  }
  if (name == "cluttered") {
    const Box boxes[] = {
      {{4.0, 5.0, 0.75}, {2.0, 2.0, 1.5}},    {{9.0, -4.5, 1.0}, {3.0, 1.5, 2.0}},
      {{14.0, 6.5, 1.25}, {2.5, 3.0, 2.5}},   {{18.0, -6.0, 0.5}, {1.5, 1.5, 1.0}},
      {{22.0, 4.5, 1.0}, {4.0, 1.5, 2.0}},    {{26.0, -4.0, 0.75}, {2.0, 2.5, 1.5}},
      {{31.0, 7.0, 1.25}, {3.0, 2.0, 2.5}},   {{35.0, -5.5, 1.0}, {2.5, 2.5, 2.0}},
    };
    scene.boxes.assign(std::begin(boxes), std::end(boxes));
    return scene;
  }
  return std::nullopt;
}

}  // namespace vecmap::sim
