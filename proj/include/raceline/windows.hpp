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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "raceline/types.hpp"

namespace raceline {

inline constexpr double kDefaultLengthRef = 30.0;
inline constexpr int kFeaturesPerNormal = 3;
/// Layout tag written to dataset and model files.
inline constexpr std::string_view kFeatureOrdering = "normal-major:l,alpha,theta";

struct FeatureRow {
  double l_norm = 0.0;  // length / l_ref
  double alpha = 0.0;
  double theta = 0.0;

  bool operator==(const FeatureRow&) const = default;
};

std::vector<FeatureRow> encode_features(const NormalSet& ns, double l_ref = kDefaultLengthRef);

/// Sliding-window shape: `foresight` normals fore and aft of the center and
/// `sampling` waypoint targets on either side.
struct WindowSpec {
  int foresight = 70;
  int sampling = 4;
  double l_ref = kDefaultLengthRef;

  int input_size() const { return kFeaturesPerNormal * (2 * foresight + 1); }
  int output_size() const { return 2 * sampling + 1; }
};

struct Window {
  std::size_t center_index = 0;
  Eigen::VectorXd features;  // rows N_{i-f} .. N_{i+f}, (l, alpha, theta) each
  Eigen::VectorXd targets;   // w_{i-s} .. w_{i+s}; empty for inference
};

/// One window per normal when cyclic; open tracks drop centers within
/// `foresight` of either end. `targets` may be empty.
std::vector<Window> make_windows(std::span<const FeatureRow> features, std::span<const double> targets,
                                 int foresight, int sampling, bool cyclic);

/// Stacks window features (and targets) column-wise.
Eigen::MatrixXd feature_matrix(std::span<const Window> windows);
Eigen::MatrixXd target_matrix(std::span<const Window> windows);

/// Dataset file: header comments carrying f, s, l_ref and ordering, then one
/// `center_index,f,s,features...,targets...` row per window.
std::string write_windows_csv(std::span<const Window> windows, const WindowSpec& spec);

struct WindowFile {
  WindowSpec spec;
  std::vector<Window> windows;
};
WindowFile parse_windows_csv(std::string_view text);

}  // namespace raceline
