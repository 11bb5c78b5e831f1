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
#include <string>
#include <vector>

#include <Eigen/Core>

namespace raceline {

using Vec2 = Eigen::Vector2d;
using Polyline = std::vector<Vec2>;

/// Centerline polyline with per-point half-widths. Left is the travel
/// direction rotated +90 degrees. Closed tracks wrap implicitly: the last
/// point is not a copy of the first.
struct Track {
  std::string name;
  Polyline points;
  std::vector<double> halfwidth_left;
  std::vector<double> halfwidth_right;
  bool closed = true;

  std::size_t size() const { return points.size(); }
};

/// Throws Error(DegenerateTrack | NonPositiveWidth | LengthMismatch) when the
/// track violates its invariants.
void validate(const Track& track);

/// Boundary-spanning segment through one centerline station.
struct Normal {
  Vec2 center = Vec2::Zero();
  Vec2 left_end = Vec2::Zero();
  Vec2 right_end = Vec2::Zero();
  Vec2 tangent = Vec2::UnitX();  // unit travel direction at the station
  double length = 0.0;           // |right_end - left_end|
  double theta = 0.0;            // signed tilt from the true perpendicular, CCW positive
  double alpha = 0.0;            // heading change from the previous station, (-pi, pi]
};

struct NormalSet {
  std::vector<Normal> normals;
  double spacing = 0.0;
  bool cyclic = true;

  std::size_t size() const { return normals.size(); }
  const Normal& operator[](std::size_t i) const { return normals[i]; }
  Normal& operator[](std::size_t i) { return normals[i]; }
};

enum class LineSource { Predicted, Oracle, External };

struct RacingLine {
  std::vector<double> w;  // 0 = left end, 1 = right end
  Polyline points;
  LineSource source = LineSource::External;

  std::size_t size() const { return w.size(); }
};

}  // namespace raceline
