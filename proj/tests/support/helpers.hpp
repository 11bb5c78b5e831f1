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

#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "raceline/error.hpp"
#include "raceline/types.hpp"

namespace testing {

/// Error code thrown by `fn`; fails the test if nothing is thrown.
inline raceline::Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const raceline::Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return raceline::Errc::Io;
}

inline raceline::Track polygon_circle(double radius, int points, double left, double right, bool ccw = true) {
  raceline::Track t;
  t.name = "circle";
  for (int i = 0; i < points; ++i) {
    const double a = 2.0 * std::numbers::pi * i / points * (ccw ? 1.0 : -1.0);
    t.points.emplace_back(radius * std::cos(a), radius * std::sin(a));
  }
  t.halfwidth_left.assign(static_cast<std::size_t>(points), left);
  t.halfwidth_right.assign(static_cast<std::size_t>(points), right);
  return t;
}

inline raceline::Track open_straight(double length, double halfwidth, int points) {
  raceline::Track t;
  t.name = "straight";
  t.closed = false;
  for (int i = 0; i < points; ++i) t.points.emplace_back(length * i / (points - 1), 0.0);
  t.halfwidth_left.assign(static_cast<std::size_t>(points), halfwidth);
  t.halfwidth_right.assign(static_cast<std::size_t>(points), halfwidth);
  return t;
}

inline raceline::Track mirror_y(raceline::Track t) {
  for (auto& p : t.points) p.y() = -p.y();
  return t;
}

}  // namespace testing
