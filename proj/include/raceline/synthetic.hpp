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

#include <cstdint>
#include <string>
#include <vector>

#include "raceline/types.hpp"

namespace raceline::synthetic {

/// Counter-clockwise circle of `points` samples; travel is CCW so the left
/// boundary is the inner one.
Track circle(double radius, double halfwidth_left, double halfwidth_right, int points = 360);

/// Stadium: two straights of `straight` metres joined by semicircles.
Track oval(double straight, double radius, double halfwidth, double ds = 1.0);

/// Closed loop around two pulleys of radii r_big and r_small whose centres
/// are `distance` apart. With r_small below the inner half-width the small
/// end is a hairpin whose straight normals cross.
Track belt(double r_big, double r_small, double distance, double halfwidth_left, double halfwidth_right,
           double ds = 0.25);

/// Open straight along +x.
Track straight(double length, double halfwidth, double ds = 1.0);

struct RandomTrackSpec {
  double mean_radius = 150.0;  // metres
  int harmonics = 6;
  double roughness = 0.16;      // first-harmonic relative amplitude
  double min_halfwidth = 4.0;
  double max_halfwidth = 7.0;
  int points = 720;
};

/// Closed CCW track r(phi) = R (1 + sum a_k cos(k phi + p_k)) with amplitudes
/// decaying as 1/k and a smoothly varying width. Deterministic in `seed`.
Track random_track(std::uint64_t seed, const RandomTrackSpec& spec = {});

/// `count` random tracks named "<prefix>NNN", seeds seed, seed+1, ...
std::vector<Track> random_corpus(int count, std::uint64_t seed, const RandomTrackSpec& spec = {},
                                 const std::string& prefix = "synth");

}  // namespace raceline::synthetic
