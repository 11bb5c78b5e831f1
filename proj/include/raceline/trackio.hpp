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
#include <string_view>

#include "raceline/types.hpp"

namespace raceline {

/// Parses `x_m,y_m,w_tr_right_m,w_tr_left_m` rows. Lines starting with `#`
/// are comments; `# open` marks an open track and `# track: <name>` carries
/// the name. A closing point duplicating the first point is dropped.
Track parse_track_csv(std::string_view text, std::string name = {});
std::string write_track_csv(const Track& track);

/// `index,x_m,y_m,w_frac` rows, one per waypoint.
std::string write_raceline_csv(const RacingLine& line);
RacingLine parse_raceline_csv(std::string_view text);

}  // namespace raceline
