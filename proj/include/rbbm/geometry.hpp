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

#ifndef RBBM_GEOMETRY_HPP
#define RBBM_GEOMETRY_HPP

#include <cmath>
#include <vector>

namespace rbbm {

/// A wall segment in meters.
struct Segment {
  double x1, y1, x2, y2;
};

/// 2D world as line segments plus the sensor's maximum range.
///
/// An empty segment list is legal (open world); every ray then returns
/// z_max.
struct SegmentMap {
  std::vector<Segment> segments;
  double z_max = 0.0;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, normalized to [-pi, pi)
};

/// Beam angles relative to the sensor heading, strictly increasing.
struct ScanGeometry {
  std::vector<double> angles;
};

/// Normalize an angle to [-pi, pi).
double normalize_angle(double a);

/// Throws std::invalid_argument on zero-length segments or z_max <= 0.
void validate_map(const SegmentMap& map);

/// Distance to the closest mapped object along the ray, clamped to z_max.
///
/// Intersections closer than 1e-9 m are discarded (the sensor cannot
/// measure its own origin); no intersection yields z_max.
double ray_cast(const SegmentMap& map, const Pose& pose, double angle);

/// Ideal (noiseless) scan: element b is ray_cast at heading + angles[b].
std::vector<double> simulate_ideal_scan(const SegmentMap& map, const Pose& pose,
                                        const ScanGeometry& geom);

}  // namespace rbbm

#endif  // RBBM_GEOMETRY_HPP
