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
#include <string>
#include <vector>

#include "raceline/network.hpp"
#include "raceline/predictor.hpp"
#include "raceline/types.hpp"

namespace raceline {

inline constexpr double kDefaultApexCurvature = 1.0 / 200.0;  // 1/m
inline constexpr int kDefaultApexRadius = 5;                  // normals

struct ErrorReport {
  std::vector<double> per_normal_error;  // metres, positive toward the right end
  double rmse = 0.0;
  double mae = 0.0;
  double mean_error = 0.0;
  double ci50 = 0.0;
  double ci95 = 0.0;
  std::vector<std::size_t> apex_indices;
  std::optional<double> apex_error_mae;  // absent when the reference has no apex
  std::optional<double> latency;         // seconds
};

/// (w_pred - w_ref) * l per normal.
std::vector<double> lateral_errors(const RacingLine& pred, const RacingLine& ref, const NormalSet& ns);

/// Fills rmse, mae, mean_error, ci50 and ci95. ciP is the smallest |e| that
/// bounds at least P% of the series.
ErrorReport summary_metrics(std::span<const double> errors);

/// Empirical quantile of |e|: sorted |e| at index ceil(p * n) - 1.
double abs_quantile(std::span<const double> errors, double p);

/// Unsigned curvature of the circle through each point and its neighbours.
/// Ends of an open line are zero.
std::vector<double> discrete_curvature(const Polyline& line, bool cyclic);

struct ApexConfig {
  double min_curvature = kDefaultApexCurvature;
  int radius = kDefaultApexRadius;
};

/// Curvature peaks at or above the threshold. A peak beats every earlier
/// neighbour within `radius` strictly and no later one is larger, so plateaus
/// give their first index.
std::vector<std::size_t> find_apexes(const Polyline& reference, bool cyclic, const ApexConfig& cfg = {});

/// Mean |lateral error| over the apexes of `ref`; nullopt if it has none.
std::optional<double> apex_error(const RacingLine& pred, const RacingLine& ref, const NormalSet& ns,
                                 const ApexConfig& cfg = {});

/// Full report: lateral errors, summary metrics and apex error.
ErrorReport evaluate_line(const RacingLine& pred, const RacingLine& ref, const NormalSet& ns,
                          const ApexConfig& cfg = {});

/// Pools the per-normal and apex errors of several reports and recomputes
/// every metric on the pooled series, so each track weighs by its normal count.
ErrorReport aggregate(std::span<const ErrorReport> reports);

/// Location (median) and scale (mean absolute deviation from it) of a
/// Laplace fit to the errors. Diagnostic only.
struct LaplaceFit {
  double location = 0.0;
  double scale = 0.0;
};
LaplaceFit laplace_fit(std::span<const double> errors);

struct LatencyReport {
  double median_total = 0.0;     // seconds per predict_line call
  double median_geometry = 0.0;   // resample, normals, repair and windows
  double median_network = 0.0;
  std::size_t normal_count = 0;
  int repetitions = 0;
  int jobs = 1;
  unsigned hardware_threads = 0;
};

/// Median wall-clock time of predict_line over `repetitions` runs, file I/O
/// excluded.
LatencyReport measure_latency(const nn::Mlp<double>& model, const Track& track, int repetitions,
                              double vehicle_width = 0.0, const PredictOptions& options = {});

double median(std::vector<double> values);

}  // namespace raceline
