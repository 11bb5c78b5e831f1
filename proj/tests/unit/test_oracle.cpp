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

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "raceline/dataset.hpp"
#include "raceline/geometry.hpp"
#include "raceline/oracle.hpp"
#include "raceline/synthetic.hpp"

using namespace raceline;
using testing::code_of;

namespace {

NormalSet annulus() { return build_normals(testing::polygon_circle(50.0, 63, 5.0, 5.0)); }

/// The 12-normal oval shared by the lattice checks.
NormalSet twelve_normal_oval() {
  const auto t = synthetic::oval(20.0, 10.0, 3.0, 0.25);
  double perimeter = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) perimeter += (t.points[(i + 1) % t.size()] - t.points[i]).norm();
  GeometryConfig g;
  g.spacing = perimeter / 12.0;
  return prepare_normals(t, g);
}

}  // namespace

TEST_CASE("objective of collinear points is zero") {
  const auto ns = build_normals(resample_centerline(testing::open_straight(100, 5, 3), 5.0));
  CHECK(curvature_objective(ns, std::vector<double>(ns.size(), 0.3)) == 0.0);
}

TEST_CASE("objective of a constant-w circle matches the circumradius") {
  const auto ns = annulus();
  for (double w : {0.0, 0.3, 0.7, 1.0}) {
    const std::vector<double> ws(ns.size(), w);
    Polyline p;
    for (std::size_t i = 0; i < ns.size(); ++i) p.push_back(ns[i].left_end + w * (ns[i].right_end - ns[i].left_end));
    const double rho = oracle::circumradius(p[62], p[0], p[1]);
    const double radius = 45.0 + 10.0 * w;
    CHECK(rho == doctest::Approx(radius).epsilon(1e-9));
    CHECK(curvature_objective(ns, ws) == doctest::Approx(63.0 / (rho * rho)).epsilon(1e-9));
  }
}

TEST_CASE("objective scales as 1 / k^2") {
  const auto t = synthetic::random_track(1);
  const auto a = prepare_normals(t);
  const auto b = prepare_normals(scale_track(t, 2.0), GeometryConfig{10.0});
  REQUIRE(a.size() == b.size());
  std::vector<double> w(a.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.5 + 0.3 * std::sin(0.1 * static_cast<double>(i));
  CHECK(curvature_objective(b, w) == doctest::Approx(curvature_objective(a, w) / 4.0).epsilon(1e-9));
}

TEST_CASE("objective matches the Heron oracle on random lines") {
  const auto ns = prepare_normals(synthetic::random_track(6));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(ns.size());
  for (auto& x : w) x = u(rng);
  CHECK(curvature_objective(ns, w) == doctest::Approx(oracle::curvature_sum(waypoints_to_world(ns, w), true)).epsilon(1e-8));
}

TEST_CASE("objective gradient agrees with central differences") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto ns = prepare_normals(synthetic::random_track(seed));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    std::vector<double> w(ns.size());
    for (auto& x : w) x = u(rng);
    Eigen::VectorXd g;
    curvature_objective(ns, w, g);
    double worst = 0.0;
    const double h = 1e-6;
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      const double fd = (curvature_objective(ns, wp) - curvature_objective(ns, wm)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[static_cast<Eigen::Index>(i)]) / std::max(1e-8, std::abs(fd)));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("wrong length is rejected") {
  const auto ns = annulus();
  CHECK(code_of([&] { curvature_objective(ns, std::vector<double>(3, 0.5)); }) == Errc::LengthMismatch);
}

TEST_CASE("zero step keeps the centerline") {
  OracleConfig cfg;
  cfg.max_iters = 1;
  cfg.step_size = 0.0;
  for (double w : mcp_solve(annulus(), cfg)) CHECK(w == 0.5);
}

TEST_CASE("config validation") {
  OracleConfig cfg;
  cfg.max_iters = 0;
  CHECK(code_of([&] { cfg.validate(); }) == Errc::InvalidConfig);
  cfg = {};
  cfg.margin = 0.5;
  CHECK(code_of([&] { cfg.validate(); }) == Errc::InvalidConfig);
}

TEST_CASE("annulus solution hugs the outer boundary") {
  const auto ns = annulus();
  OracleConfig cfg;
  cfg.margin = 0.01;
  const auto w = mcp_solve(ns, cfg);
  // Brute force over constant lines: the largest radius wins.
  double best_w = -1.0, best_f = 1e300;
  for (int k = 0; k <= 10; ++k) {
    const double c = 0.1 * k;
    const double f = oracle::curvature_sum(waypoints_to_world(ns, std::vector<double>(ns.size(), c)), true);
    if (f < best_f) {
      best_f = f;
      best_w = c;
    }
  }
  CHECK(best_w == 1.0);
  for (double x : w) CHECK(x == doctest::Approx(0.99).epsilon(0.005));
}

TEST_CASE("12-normal oval is within 5% of the lattice optimum") {
  const auto ns = twelve_normal_oval();
  REQUIRE(ns.size() == 12);
  std::vector<Vec2> left, right;
  for (const auto& n : ns.normals) {
    left.push_back(n.left_end);
    right.push_back(n.right_end);
  }
  const double lattice = oracle::lattice_minimum(left, right, {0.0, 0.25, 0.5, 0.75, 1.0});
  const double mcp = curvature_objective(ns, mcp_solve(ns, {}));
  MESSAGE("lattice " << lattice << " mcp " << mcp);
  CHECK(mcp <= 1.05 * lattice);
}

TEST_CASE("solver invariants") {
  const auto ns = prepare_normals(synthetic::random_track(8));
  OracleConfig cfg;
  const auto trace = mcp_solve_traced(ns, cfg);
  for (std::size_t i = 1; i < trace.objective.size(); ++i) CHECK(trace.objective[i] <= trace.objective[i - 1]);
  CHECK(trace.objective.back() < trace.objective.front());
  for (double w : trace.w) {
    CHECK(w >= cfg.margin);
    CHECK(w <= 1.0 - cfg.margin);
  }
  CHECK(mcp_solve(ns, cfg) == trace.w);
}

TEST_CASE("targets for a circle and its mirror image") {
  const auto circle = synthetic::circle(50.0, 5.0, 5.0);
  const auto t = generate_targets(circle, {});
  CHECK(t.w.size() == t.normals.size());
  for (double w : t.w) CHECK(w >= 0.98);

  const auto track = synthetic::random_track(5);
  const auto a = generate_targets(track, {});
  const auto b = generate_targets(flip_track(track), {});
  REQUIRE(a.w.size() == b.w.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.w.size(); ++i) worst = std::max(worst, std::abs(b.w[i] - (1.0 - a.w[i])));
  CHECK(worst < 0.01);
}
