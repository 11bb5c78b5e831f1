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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "raceline/geometry.hpp"
#include "raceline/network.hpp"
#include "raceline/types.hpp"

namespace raceline {

/// clamp(w, v / 2l, 1 - v / 2l). Throws WidthTooLarge unless v < l.
double apply_vehicle_width(double w, double length, double vehicle_width);

/// Windows are evaluated in fixed chunks of this many columns whatever the
/// job count, which keeps parallel and serial results bit-identical.
inline constexpr std::size_t kWindowChunk = 64;

/// Network outputs for each column of `features`, as (2s+1) x windows.
Eigen::MatrixXd window_outputs(const nn::Mlp<double>& model, const Eigen::MatrixXd& features, int jobs = 1);

/// Per-normal mean of overlapping predictions. Slot k of window c predicts
/// normal c - s + k; only slots with |k - s| <= `used_sampling` contribute,
/// so used_sampling = 0 keeps the central output alone. Windows are summed in
/// ascending order. Normals no window reaches (open-track ends) take the
/// value of the nearest reached normal.
std::vector<double> average_predictions(const Eigen::MatrixXd& outputs, std::span<const std::size_t> centers,
                                        std::size_t normal_count, int sampling, bool cyclic, int used_sampling);

struct StageTimes {
  double geometry = 0.0;  // resample, normals, repair (seconds)
  double windows = 0.0;   // feature encoding and window assembly
  double network = 0.0;
  double assemble = 0.0;  // averaging, width clamp, world points
  double total = 0.0;
};

struct PredictOptions {
  std::optional<double> spacing;  // defaults to the model's training spacing
  double max_tilt = kDefaultMaxTilt;
  double tilt_step = kDefaultTiltStep;
  int jobs = 1;
  StageTimes* timing = nullptr;
};

struct Prediction {
  NormalSet normals;
  RacingLine line;
  Eigen::MatrixXd outputs;             // raw per-window outputs
  std::vector<std::size_t> centers;    // window center per output column
};

/// resample -> normals -> repair -> features -> windows -> network -> mean of
/// the 2s+1 overlapping outputs -> vehicle-width clamp -> world points.
Prediction predict_line(const nn::Mlp<double>& model, const Track& track, double vehicle_width,
                        const PredictOptions& options = {});

}  // namespace raceline
