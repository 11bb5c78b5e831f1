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
#include <numbers>
#include <random>
#include <thread>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "raceline/evaluation.hpp"
#include "raceline/geometry.hpp"
#include "raceline/synthetic.hpp"

using namespace raceline;
using testing::code_of;

namespace {

NormalSet ten_metre_normals(std::size_t n) {
  NormalSet ns;
  ns.cyclic = false;
  for (std::size_t i = 0; i < n; ++i) {
    Normal m;
    m.center = Vec2(5.0 * static_cast<double>(i), 0.0);
    m.left_end = m.center + Vec2(0, 5);
    m.right_end = m.center - Vec2(0, 5);
    m.length = 10.0;
    ns.normals.push_back(m);
  }
  return ns;
}

RacingLine line_of(const NormalSet& ns, std::vector<double> w) {
  RacingLine l;
  l.points = waypoints_to_world(ns, w);
  l.w = std::move(w);
  return l;
}

/// Open track along y = sqrt(x^2 + a^2) rotated so both arms meet at 90 deg.
Track corner_track() {
  Track t;
  t.name = "corner";
  t.closed = false;
  for (int i = -400; i <= 400; ++i) {
    const double x = 0.25 * i;
    t.points.emplace_back(x, std::sqrt(x * x + 15.0 * 15.0));
  }
  t.halfwidth_left.assign(t.points.size(), 5.0);
  t.halfwidth_right.assign(t.points.size(), 5.0);
  return t;
}

}  // namespace

TEST_CASE("lateral errors") {
  const auto ns = ten_metre_normals(6);
  const auto ref = line_of(ns, std::vector<double>(6, 0.5));
  SUBCASE("identical lines") {
    for (double e : lateral_errors(ref, ref, ns)) CHECK(e == 0.0);
  }
  SUBCASE("constant offset") {
    for (double e : lateral_errors(line_of(ns, std::vector<double>(6, 0.55)), ref, ns)) {
      CHECK(e == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  SUBCASE("alternating offsets") {
    const auto e = lateral_errors(line_of(ns, {0.6, 0.4, 0.6, 0.4, 0.6, 0.4}), ref, ns);
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(e[i] == doctest::Approx(i % 2 == 0 ? 1.0 : -1.0));
    const auto r = summary_metrics(e);
    CHECK(r.mae == doctest::Approx(1.0));
    CHECK(r.mean_error == doctest::Approx(0.0));
  }
  SUBCASE("length mismatch") {
    CHECK(code_of([&] { lateral_errors(line_of(ns, {0.5}), ref, ns); }) == Errc::LengthMismatch);
  }
}

TEST_CASE("summary metrics") {
  SUBCASE("constant series") {
    const auto r = summary_metrics(std::vector<double>(17, 0.3));
    CHECK(r.rmse == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.mae == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.mean_error == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.ci50 == 0.3);
    CHECK(r.ci95 == 0.3);
  }
  SUBCASE("zeros") {
    const auto r = summary_metrics(std::vector<double>(5, 0.0));
    CHECK(r.rmse == 0.0);
    CHECK(r.mae == 0.0);
    CHECK(r.mean_error == 0.0);
    CHECK(r.ci95 == 0.0);
  }
  SUBCASE("quantiles are empirical") {
    std::vector<double> e;
    for (int i = 1; i <= 100; ++i) e.push_back(i % 2 == 0 ? 0.01 * i : -0.01 * i);
    const auto r = summary_metrics(e);
    CHECK(r.ci50 == doctest::Approx(0.50));
    CHECK(r.ci95 == doctest::Approx(0.95));
  }
  SUBCASE("empty") {
    CHECK(code_of([] { summary_metrics(std::vector<double>{}); }) == Errc::Empty);
  }
}

TEST_CASE("metric algebra on random series") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.1, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> e(1 + static_cast<std::size_t>(trial) * 7);
    for (auto& x : e) x = nd(rng);
    const auto r = summary_metrics(e);
    CHECK(r.rmse >= r.mae);
    CHECK(r.mae >= std::abs(r.mean_error));
    CHECK(r.ci50 <= r.ci95);
    for (auto& x : e) x = -x;
    const auto n = summary_metrics(e);
    CHECK(n.rmse == r.rmse);
    CHECK(n.mae == r.mae);
    CHECK(n.ci50 == r.ci50);
    CHECK(n.ci95 == r.ci95);
    CHECK(n.mean_error == -r.mean_error);
  }
}

TEST_CASE("apex of a 90 degree corner") {
  const auto ns = prepare_normals(corner_track());
  const auto ref = line_of(ns, std::vector<double>(ns.size(), 0.5));
  // Brute-force curvature scan for the expected apex.
  std::size_t expected = 0;
  double best = 0.0;
  for (std::size_t i = 1; i + 1 < ns.size(); ++i) {
    const double k = 1.0 / oracle::circumradius(ref.points[i - 1], ref.points[i], ref.points[i + 1]);
    if (k > best) {
      best = k;
      expected = i;
    }
  }
  const auto apexes = find_apexes(ref.points, false);
  REQUIRE(apexes.size() == 1);
  CHECK(apexes[0] == expected);

  auto w = ref.w;
  w[expected] += 0.02;
  const auto pred = line_of(ns, w);
  const auto err = apex_error(pred, ref, ns);
  REQUIRE(err.has_value());
  CHECK(*err == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(apex_error(ref, ref, ns).value() == 0.0);

  // Mirroring keeps the apex index.
  const auto ms = prepare_normals(testing::mirror_y(corner_track()));
  const auto mref = line_of(ms, std::vector<double>(ms.size(), 0.5));
  CHECK(find_apexes(mref.points, false) == apexes);
}

TEST_CASE("a straight has no apex") {
  const auto ns = prepare_normals(synthetic::straight(300.0, 5.0));
  const auto ref = line_of(ns, std::vector<double>(ns.size(), 0.5));
  CHECK_FALSE(apex_error(ref, ref, ns).has_value());
  const auto r = evaluate_line(ref, ref, ns);
  CHECK_FALSE(r.apex_error_mae.has_value());
}

TEST_CASE("apex detection is deterministic and mirror invariant on random tracks") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto t = synthetic::random_track(seed);
    const auto a = prepare_normals(t);
    const auto b = prepare_normals(testing::mirror_y(t));
    const auto la = waypoints_to_world(a, std::vector<double>(a.size(), 0.5));
    const auto lb = waypoints_to_world(b, std::vector<double>(b.size(), 0.5));
    CHECK(find_apexes(la, true) == find_apexes(la, true));
    CHECK(find_apexes(la, true) == find_apexes(lb, true));
  }
}

TEST_CASE("aggregate pools the per-normal series") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd(0.0, 0.3);
  std::vector<ErrorReport> reports;
  std::vector<double> pooled;
  double apex_sum = 0.0;
  int apex_count = 0;
  for (int t = 0; t < 3; ++t) {
    std::vector<double> e(50 + 30 * static_cast<std::size_t>(t));
    for (auto& x : e) x = nd(rng);
    auto r = summary_metrics(e);
    r.apex_indices = {1, 7};
    apex_sum += std::abs(e[1]) + std::abs(e[7]);
    apex_count += 2;
    pooled.insert(pooled.end(), e.begin(), e.end());
    reports.push_back(r);
  }
  const auto agg = aggregate(reports);
  const auto direct = summary_metrics(pooled);
  CHECK(agg.rmse == direct.rmse);
  CHECK(agg.mae == direct.mae);
  CHECK(agg.mean_error == direct.mean_error);
  CHECK(agg.ci95 == direct.ci95);
  CHECK(agg.apex_error_mae.value() == doctest::Approx(apex_sum / apex_count));
}

TEST_CASE("laplace fit") {
  const auto fit = laplace_fit(std::vector<double>{-1.0, 0.0, 0.0, 1.0, 3.0});
  CHECK(fit.location == 0.0);
  CHECK(fit.scale == doctest::Approx(1.0));
}

TEST_CASE("latency measurement") {
  const auto model = nn::make_window_mlp<double>(WindowSpec{10, 2}, {16, 8, 8}, 1);
  const auto track = synthetic::random_track(1);
  const auto one = measure_latency(model, track, 1);
  CHECK(one.repetitions == 1);
  CHECK(one.median_total > 0.0);
  CHECK(one.median_geometry <= one.median_total);
  CHECK(one.normal_count > 0);
  CHECK(code_of([&] { measure_latency(model, track, 0); }) == Errc::InvalidConfig);
}

TEST_CASE("parallel windows scale sublinearly with track length") {
  const unsigned cores = std::thread::hardware_concurrency();
  if (cores < 2) {
    MESSAGE("skipped: needs at least two hardware threads, found " << cores);
    return;
  }
  const auto model = nn::make_window_mlp<double>(WindowSpec{70, 4}, nn::kDefaultHidden, 1);
  synthetic::RandomTrackSpec spec;
  spec.mean_radius = 1500.0 / (2 * std::numbers::pi);
  const auto short_track = synthetic::random_track(2, spec);
  spec.mean_radius *= 2.0;
  const auto long_track = synthetic::random_track(2, spec);
  PredictOptions o;
  o.jobs = static_cast<int>(cores);
  const auto a = measure_latency(model, short_track, 7, 0.0, o);
  const auto b = measure_latency(model, long_track, 7, 0.0, o);
  MESSAGE(a.normal_count << " normals " << a.median_total << " s, " << b.normal_count << " normals "
                         << b.median_total << " s");
  CHECK(b.median_total < 2.0 * a.median_total);
}
