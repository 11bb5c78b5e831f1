// Copyright 2026 The Raceline Authors
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

#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "raceline/types.hpp"

namespace raceline {

inline constexpr double kDegree = std::numbers::pi / 180.0;
inline constexpr double kDefaultSpacing = 5.0;
inline constexpr double kDefaultMaxTilt = 45.0 * kDegree;
inline constexpr double kDefaultTiltStep = 1.0 * kDegree;

/// Points at uniform arc length along the input centerline. Closed tracks use
/// N = round(perimeter / spacing) points so the loop closes exactly; open
/// tracks keep both end points. Half-widths are interpolated by arc length.
Track resample_centerline(const Track& track, double spacing);

/// One perpendicular segment per centerline point. Tangents are central
/// differences (one-sided at the ends of an open track).
NormalSet build_normals(const Track& resampled);

/// Tilts intersecting normals into pseudo-normals until no two segments
/// intersect. Normals that are not involved keep their exact input values.
/// Throws Error(Unresolvable) if a tilt would exceed `max_tilt`.
NormalSet resolve_intersections(const NormalSet& ns, double max_tilt = kDefaultMaxTilt,
                                double step = kDefaultTiltStep);

struct GeometryConfig {
  double spacing = kDefaultSpacing;
  double max_tilt = kDefaultMaxTilt;
  double tilt_step = kDefaultTiltStep;
};

/// resample -> build_normals -> resolve_intersections.
NormalSet prepare_normals(const Track& track, const GeometryConfig& cfg = {});

/// left_end + w * (right_end - left_end); throws Error(OutOfRange) outside [0, 1].
Vec2 waypoint_to_world(const Normal& n, double w);
Polyline waypoints_to_world(const NormalSet& ns, const std::vector<double>& w);

/// Fraction along each normal (from its left end) at which `line` crosses it.
std::vector<double> project_line_to_waypoints(const NormalSet& ns, const Polyline& line,
                                              bool line_closed = true);

/// Builds a closed centerline track from two closed boundary polylines, the
/// inner lying strictly inside the outer.
Track reconstruct_from_boundaries(const Polyline& inner, const Polyline& outer);

// Segment helpers shared by repair and its tests.

struct SegmentHit {
  double t = 0.0;  // parameter along the first segment
  double u = 0.0;  // parameter along the second segment
};

/// Closed-segment intersection (touching counts). Collinear overlaps report
/// the midpoint of the overlap.
std::optional<SegmentHit> segment_intersection(const Vec2& a, const Vec2& b, const Vec2& c,
                                               const Vec2& d);

struct NormalPairHit {
  std::size_t i = 0;
  std::size_t j = 0;
  SegmentHit hit;
};

/// All intersecting normal pairs, i < j, sorted by (i, j).
std::vector<NormalPairHit> intersecting_pairs(const NormalSet& ns);

Polyline left_boundary(const NormalSet& ns);
Polyline right_boundary(const NormalSet& ns);
Polyline centerline(const NormalSet& ns);

/// Signed polygon area, positive for counterclockwise order.
double signed_area(const Polyline& polygon);

}  // namespace raceline
