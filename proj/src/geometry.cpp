// Copyright 2026 the rbbm authors
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

#include "rbbm/geometry.hpp"

#include <limits>
#include <stdexcept>

namespace rbbm {

namespace {
constexpr double kMinRayParam = 1e-9;  // meters; discard self-hits
}

double normalize_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

void validate_map(const SegmentMap& map) {
  if (!(map.z_max > 0.0)) throw std::invalid_argument("map: z_max must be > 0");
  for (const auto& s : map.segments) {
    const double dx = s.x2 - s.x1;
    const double dy = s.y2 - s.y1;
    if (dx == 0.0 && dy == 0.0)
      throw std::invalid_argument("map: zero-length segment");
  }
}

double ray_cast(const SegmentMap& map, const Pose& pose, double angle) {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);

  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : map.segments) {
    const double ex = s.x2 - s.x1;
    const double ey = s.y2 - s.y1;
    const double denom = dx * ey - dy * ex;
    if (denom == 0.0) continue;  // parallel
    const double rx = s.x1 - pose.x;
    const double ry = s.y1 - pose.y;
    const double t = (rx * ey - ry * ex) / denom;
    const double u = (rx * dy - ry * dx) / denom;
    if (t >= kMinRayParam && u >= 0.0 && u <= 1.0 && t < best) best = t;
  }
  return std::min(best, map.z_max);
}

std::vector<double> simulate_ideal_scan(const SegmentMap& map, const Pose& pose,
                                        const ScanGeometry& geom) {
  std::vector<double> out;
  out.reserve(geom.angles.size());
  for (double a : geom.angles) out.push_back(ray_cast(map, pose, pose.heading + a));
  return out;
}

}  // namespace rbbm
