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
#include <string_view>
#include <vector>

#include "raceline/dataset.hpp"
#include "raceline/evaluation.hpp"
#include "raceline/geometry.hpp"
#include "raceline/network.hpp"
#include "raceline/oracle.hpp"
#include "raceline/windows.hpp"

namespace raceline {

/// Everything a run needs. Defaults: 5 m spacing, f = 70, s = 4 and
/// 450/200/200 hidden units.
struct RunConfig {
  double spacing = kDefaultSpacing;
  int foresight = 70;
  int sampling = 4;
  double l_ref = kDefaultLengthRef;
  double vehicle_width = 0.0;
  std::uint64_t seed = 0;
  int jobs = 1;
  double max_tilt_deg = 45.0;
  double tilt_step_deg = 1.0;
  std::vector<int> hidden = nn::kDefaultHidden;
  OracleConfig oracle;
  AugmentSpec augment;
  SplitSpec split;
  nn::TrainConfig train;
  ApexConfig apex;
  int latency_repetitions = 5;

  void validate() const;
  GeometryConfig geometry() const;
  WindowSpec window_spec() const { return {foresight, sampling, l_ref}; }
};

/// INI text: top-level keys plus [geometry], [oracle], [augment], [split],
/// [train] and [evaluate] sections. Unknown keys are rejected.
RunConfig parse_run_config(std::string_view ini, RunConfig base = {});
std::string format_run_config(const RunConfig& cfg);

/// One augmented track with its oracle targets and windows.
struct Sample {
  AugmentedTrack source;
  NormalSet normals;
  std::vector<double> w;
  std::vector<Window> windows;
  std::string split;  // train | validation | test
};

struct SampleFailure {
  std::string name;
  std::string message;
};

struct GeneratedData {
  std::vector<Sample> samples;  // source order, then augmentation order
  std::vector<SampleFailure> failures;
  Split split;
};

/// augment -> oracle targets -> windows for every source, split by family.
/// With fewer than three families everything lands in the training split.
/// Work runs on cfg.jobs threads; the result does not depend on it.
GeneratedData generate_dataset(const std::vector<Track>& sources, const RunConfig& cfg);

/// Stacks the windows of every sample in `split` into a training set.
nn::Dataset stack_windows(const std::vector<Sample>& samples, std::string_view split);

/// A fresh model for the configured window and hidden sizes.
nn::Mlp<double> make_model(const RunConfig& cfg);

/// Oracle line of a sample as a racing line.
RacingLine target_line(const Sample& sample);

}  // namespace raceline
