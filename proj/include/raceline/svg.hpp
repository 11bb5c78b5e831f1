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

#include <string>
#include <vector>

#include "raceline/types.hpp"

namespace raceline {

struct SvgSeries {
  std::string label;
  Polyline points;
  std::string color;
  double stroke = 1.0;  // in metres of track
  bool closed = true;
};

/// Plot of the track boundaries followed by each series, with a legend.
/// Coordinates are flipped so +y points up.
std::string render_svg(const NormalSet& ns, const std::vector<SvgSeries>& lines, double pixels_per_metre = 1.0);

/// Boundaries, then the reference (when non-empty) and the prediction.
std::string racing_line_svg(const NormalSet& ns, const RacingLine& prediction, const RacingLine* reference = nullptr);

}  // namespace raceline
