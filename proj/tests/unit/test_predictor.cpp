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

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "raceline/geometry.hpp"
#include "raceline/predictor.hpp"
#include "raceline/synthetic.hpp"
#include "raceline/windows.hpp"

using namespace raceline;
using testing::code_of;

namespace {

nn::Mlp<double> window_model(int f, int s, std::uint64_t seed) {
  return nn::make_window_mlp<double>(WindowSpec{f, s, kDefaultLengthRef}, {12, 8, 8}, seed);
}

/// Mean of the second difference squared along a closed sequence.
double roughness(const std::vector<double>& w) {
  const std::size_t n = w.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = w[(i + n - 1) % n] - 2.0 * w[i] + w[(i + 1) % n];
    sum += d * d;
  }
  return sum / static_cast<double>(n);
}

}  // namespace

TEST_CASE("vehicle width clamp") {
  CHECK(apply_vehicle_width(0.02, 10.0, 0.0) == 0.02);
  CHECK(apply_vehicle_width(0.02, 10.0, 2.0) == doctest::Approx(0.1));
  CHECK(apply_vehicle_width(0.5, 10.0, 2.0) == 0.5);
  CHECK(apply_vehicle_width(0.97, 10.0, 2.0) == doctest::Approx(0.9));
  CHECK(code_of([] { apply_vehicle_width(0.5, 10.0, 10.0); }) == Errc::WidthTooLarge);
  CHECK(code_of([] { apply_vehicle_width(0.5, 10.0, -1.0); }) == Errc::InvalidConfig);
}

TEST_CASE("s = 0 returns each window's single output") {
  const auto model = window_model(6, 0, 1);
  const auto track = synthetic::random_track(1);
  const auto p = predict_line(model, track, 0.0);
  const auto feats = encode_features(p.normals);
  const auto wins = make_windows(feats, {}, 6, 0, true);
  for (std::size_t i = 0; i < wins.size(); ++i) {
    CHECK(p.line.w[i] == p.outputs(0, static_cast<Eigen::Index>(i)));
    // Batched and single-column products may round differently.
    CHECK(p.line.w[i] == doctest::Approx(nn::forward(model, wins[i].features)[0]).epsilon(1e-12));
  }
}

TEST_CASE("s = 4 averages nine predictions in window order") {
  const auto model = window_model(6, 4, 2);
  const auto track = synthetic::random_track(2);
  const auto p = predict_line(model, track, 0.0);
  const auto wins = make_windows(encode_features(p.normals), {}, 6, 4, true);
  const long n = static_cast<long>(wins.size());
  std::vector<Eigen::VectorXd> outs;
  for (const auto& w : wins) outs.push_back(nn::forward(model, w.features));
  CHECK(p.outputs.cols() == n);
  for (long j = 0; j < n; ++j) {
    double sum = 0.0, single = 0.0;
    int count = 0;
    for (long c = 0; c < n; ++c) {
      for (int k = 0; k <= 8; ++k) {
        if (((c - 4 + k) % n + n) % n == j) {
          sum += p.outputs(k, c);
          single += outs[static_cast<std::size_t>(c)][k];
          ++count;
        }
      }
    }
    CHECK(count == 9);
    CHECK(p.line.w[static_cast<std::size_t>(j)] == sum / 9.0);
    CHECK(p.line.w[static_cast<std::size_t>(j)] == doctest::Approx(single / 9.0).epsilon(1e-12));
  }
}

TEST_CASE("constant model gives the centerline on a symmetric track") {
  auto model = window_model(5, 2, 3);
  for (auto& l : model.layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
  const auto track = synthetic::random_track(3);
  const auto p = predict_line(model, track, 0.0);
  for (std::size_t i = 0; i < p.line.size(); ++i) {
    CHECK(p.line.w[i] == 0.5);
    CHECK((p.line.points[i] - p.normals[i].center).norm() < 1e-9);
  }
  CHECK(p.line.source == LineSource::Predicted);
}

TEST_CASE("averaging smooths the per-window outputs") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto model = window_model(8, 4, 10 + seed);
    const auto p = predict_line(model, synthetic::random_track(seed), 0.0);
    const auto s0 = average_predictions(p.outputs, p.centers, p.normals.size(), 4, true, 0);
    const auto s4 = average_predictions(p.outputs, p.centers, p.normals.size(), 4, true, 4);
    CHECK(roughness(s4) <= roughness(s0));
    CHECK(s4 == p.line.w);
  }
}

TEST_CASE("parallel evaluation is bit-identical to serial") {
  const auto model = window_model(10, 3, 4);
  const auto track = synthetic::random_track(4);
  PredictOptions serial, parallel;
  parallel.jobs = 4;
  const auto a = predict_line(model, track, 1.0, serial);
  const auto b = predict_line(model, track, 1.0, parallel);
  CHECK(a.line.w == b.line.w);
  CHECK(a.line.points == b.line.points);
}

TEST_CASE("vehicle width bounds every waypoint") {
  const auto model = window_model(5, 2, 5);
  const auto p = predict_line(model, synthetic::random_track(5), 2.0);
  for (std::size_t i = 0; i < p.line.size(); ++i) {
    const double m = 2.0 / (2.0 * p.normals[i].length);
    CHECK(p.line.w[i] >= m);
    CHECK(p.line.w[i] <= 1.0 - m);
  }
  CHECK(code_of([&] { predict_line(model, synthetic::random_track(5), 50.0); }) == Errc::WidthTooLarge);
}

TEST_CASE("incompatible models are refused") {
  auto model = window_model(5, 2, 6);
  model.meta.foresight = 6;
  CHECK(code_of([&] { predict_line(model, synthetic::random_track(6), 0.0); }) == Errc::IncompatibleModel);
}

TEST_CASE("open tracks hold the nearest covered value at the ends") {
  const auto model = window_model(3, 1, 7);
  const auto p = predict_line(model, synthetic::straight(200.0, 5.0), 0.0);
  const std::size_t n = p.normals.size();
  REQUIRE(n == 41);
  CHECK(p.centers.front() == 3);
  CHECK(p.line.w[0] == p.line.w[2]);
  CHECK(p.line.w[n - 1] == p.line.w[n - 3]);
  for (double w : p.line.w) CHECK(std::isfinite(w));
}

TEST_CASE("stage timings are reported") {
  const auto model = window_model(5, 2, 8);
  StageTimes t;
  PredictOptions o;
  o.timing = &t;
  predict_line(model, synthetic::random_track(8), 0.0, o);
  CHECK(t.total > 0.0);
  CHECK(t.geometry + t.windows + t.network + t.assemble <= t.total * 1.0001);
}
