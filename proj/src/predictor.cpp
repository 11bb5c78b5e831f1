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

#include "raceline/predictor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "raceline/error.hpp"
#include "raceline/parallel.hpp"
#include "raceline/windows.hpp"

namespace raceline {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

double apply_vehicle_width(double w, double length, double vehicle_width) {
  if (!(vehicle_width >= 0.0)) throw Error(Errc::InvalidConfig, "vehicle width must be non-negative");
  if (!(vehicle_width < length)) throw Error(Errc::WidthTooLarge, "vehicle width must be below the normal length");
  const double margin = vehicle_width / (2.0 * length);
  return std::clamp(w, margin, 1.0 - margin);
}

Eigen::MatrixXd window_outputs(const nn::Mlp<double>& model, const Eigen::MatrixXd& features, int jobs) {
  if (features.rows() != model.input_size()) throw Error(Errc::IncompatibleModel, "window size does not match model");
  const auto count = static_cast<std::size_t>(features.cols());
  Eigen::MatrixXd out(model.output_size(), features.cols());
  const std::size_t chunks = (count + kWindowChunk - 1) / kWindowChunk;
  parallel_for(chunks, jobs, [&](std::size_t c) {
    const auto begin = static_cast<Eigen::Index>(c * kWindowChunk);
    const auto len = static_cast<Eigen::Index>(std::min(kWindowChunk, count - c * kWindowChunk));
    out.middleCols(begin, len) = nn::forward(model, features.middleCols(begin, len));
  });
  return out;
}

std::vector<double> average_predictions(const Eigen::MatrixXd& outputs, std::span<const std::size_t> centers,
                                        std::size_t normal_count, int sampling, bool cyclic, int used_sampling) {
  if (outputs.rows() != 2 * sampling + 1 || static_cast<std::size_t>(outputs.cols()) != centers.size()) {
    throw Error(Errc::ShapeMismatch, "outputs do not match window layout");
  }
  if (used_sampling < 0 || used_sampling > sampling) throw Error(Errc::InvalidConfig, "used sampling out of range");
  const auto n = static_cast<long>(normal_count);
  std::vector<double> sum(normal_count, 0.0);
  std::vector<int> hits(normal_count, 0);
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (int k = sampling - used_sampling; k <= sampling + used_sampling; ++k) {
      long j = static_cast<long>(centers[c]) - sampling + k;
      if (cyclic) {
        j = ((j % n) + n) % n;
      } else if (j < 0 || j >= n) {
        continue;
      }
      sum[static_cast<std::size_t>(j)] += outputs(k, static_cast<Eigen::Index>(c));
      ++hits[static_cast<std::size_t>(j)];
    }
  }
  std::vector<double> w(normal_count, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < normal_count; ++i) {
    if (hits[i] > 0) w[i] = sum[i] / hits[i];
  }
  // Open tracks: hold the nearest reached value at each end.
  const auto first = std::find_if(hits.begin(), hits.end(), [](int h) { return h > 0; });
  if (first == hits.end()) throw Error(Errc::TooShort, "no window covers any normal");
  const auto lo = static_cast<std::size_t>(first - hits.begin());
  std::size_t hi = normal_count - 1;
  while (hits[hi] == 0) --hi;
  for (std::size_t i = 0; i < lo; ++i) w[i] = w[lo];
  for (std::size_t i = hi + 1; i < normal_count; ++i) w[i] = w[hi];
  for (std::size_t i = lo + 1; i < hi; ++i) {
    if (hits[i] == 0) w[i] = w[i - 1];
  }
  return w;
}

Prediction predict_line(const nn::Mlp<double>& model, const Track& track, double vehicle_width,
                        const PredictOptions& options) {
  const auto t0 = Clock::now();
  nn::check_window_shapes(model);
  if (!(vehicle_width >= 0.0)) throw Error(Errc::InvalidConfig, "vehicle width must be non-negative");
  const auto& meta = model.meta;

  GeometryConfig geometry;
  geometry.spacing = options.spacing.value_or(meta.spacing);
  geometry.max_tilt = options.max_tilt;
  geometry.tilt_step = options.tilt_step;

  Prediction out;
  out.normals = prepare_normals(track, geometry);
  for (const auto& nrm : out.normals.normals) {
    if (!(vehicle_width < nrm.length)) {
      throw Error(Errc::WidthTooLarge, "vehicle width must be below every normal length");
    }
  }
  const auto t1 = Clock::now();

  const auto features = encode_features(out.normals, meta.l_ref);
  const auto windows = make_windows(features, {}, meta.foresight, meta.sampling, out.normals.cyclic);
  const Eigen::MatrixXd x = feature_matrix(windows);
  out.centers.reserve(windows.size());
  for (const auto& win : windows) out.centers.push_back(win.center_index);
  const auto t2 = Clock::now();

  out.outputs = window_outputs(model, x, options.jobs);
  const auto t3 = Clock::now();

  auto w = average_predictions(out.outputs, out.centers, out.normals.size(), meta.sampling, out.normals.cyclic,
                               meta.sampling);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = apply_vehicle_width(w[i], out.normals[i].length, vehicle_width);
  out.line.points = waypoints_to_world(out.normals, w);
  out.line.w = std::move(w);
  out.line.source = LineSource::Predicted;

  if (options.timing != nullptr) {
    auto& t = *options.timing;
    t.geometry = std::chrono::duration<double>(t1 - t0).count();
    t.windows = std::chrono::duration<double>(t2 - t1).count();
    t.network = std::chrono::duration<double>(t3 - t2).count();
    t.assemble = seconds_since(t3);
    t.total = seconds_since(t0);
  }
  return out;
}

}  // namespace raceline
