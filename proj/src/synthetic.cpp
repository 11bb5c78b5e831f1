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

#include "raceline/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "raceline/error.hpp"
#include "raceline/random.hpp"

namespace raceline::synthetic {
namespace {

constexpr double kPi = std::numbers::pi;

Track uniform_width(std::string name, Polyline points, double left, double right, bool closed) {
  Track t;
  t.name = std::move(name);
  t.halfwidth_left.assign(points.size(), left);
  t.halfwidth_right.assign(points.size(), right);
  t.points = std::move(points);
  t.closed = closed;
  validate(t);
  return t;
}

void append_arc(Polyline& out, const Vec2& c, double r, double from, double to, double ds) {
  const int m = std::max(2, static_cast<int>(std::abs(to - from) * r / ds));
  for (int k = 0; k < m; ++k) {
    const double a = from + (to - from) * k / m;
    out.emplace_back(c.x() + r * std::cos(a), c.y() + r * std::sin(a));
  }
}

void append_segment(Polyline& out, const Vec2& p, const Vec2& q, double ds) {
  const int m = std::max(1, static_cast<int>((q - p).norm() / ds));
  for (int k = 0; k < m; ++k) out.push_back(p + (q - p) * (static_cast<double>(k) / m));
}

}  // namespace

Track circle(double radius, double halfwidth_left, double halfwidth_right, int points) {
  Polyline p;
  for (int i = 0; i < points; ++i) {
    const double a = 2.0 * kPi * i / points;
    p.emplace_back(radius * std::cos(a), radius * std::sin(a));
  }
  return uniform_width("circle", std::move(p), halfwidth_left, halfwidth_right, true);
}

Track oval(double straight, double radius, double halfwidth, double ds) {
  Polyline p;
  const Vec2 c0(0.0, 0.0);
  const Vec2 c1(straight, 0.0);
  append_segment(p, {0.0, -radius}, {straight, -radius}, ds);
  append_arc(p, c1, radius, -kPi / 2, kPi / 2, ds);
  append_segment(p, {straight, radius}, {0.0, radius}, ds);
  append_arc(p, c0, radius, kPi / 2, 3 * kPi / 2, ds);
  return uniform_width("oval", std::move(p), halfwidth, halfwidth, true);
}

Track belt(double r_big, double r_small, double distance, double halfwidth_left, double halfwidth_right,
           double ds) {
  if (!(distance > std::abs(r_big - r_small))) throw Error(Errc::InvalidConfig, "pulleys overlap");
  const double b = std::asin((r_big - r_small) / distance);
  const double a0 = kPi / 2 - b;
  const double a1 = 3 * kPi / 2 + b;
  const Vec2 big(0.0, 0.0);
  const Vec2 small(distance, 0.0);
  auto on = [](const Vec2& c, double r, double a) { return Vec2(c.x() + r * std::cos(a), c.y() + r * std::sin(a)); };
  Polyline p;
  append_arc(p, big, r_big, a0, a1, ds);
  append_segment(p, on(big, r_big, a1), on(small, r_small, a1), ds);
  append_arc(p, small, r_small, a1 - 2 * kPi, a0, ds);
  append_segment(p, on(small, r_small, a0), on(big, r_big, a0), ds);
  return uniform_width("belt", std::move(p), halfwidth_left, halfwidth_right, true);
}

Track straight(double length, double halfwidth, double ds) {
  Polyline p;
  const int m = std::max(2, static_cast<int>(length / ds));
  for (int k = 0; k <= m; ++k) p.emplace_back(length * k / m, 0.0);
  return uniform_width("straight", std::move(p), halfwidth, halfwidth, false);
}

Track random_track(std::uint64_t seed, const RandomTrackSpec& spec) {
  if (spec.harmonics < 1 || spec.points < 16 || !(spec.mean_radius > 0.0) ||
      !(spec.min_halfwidth > 0.0 && spec.max_halfwidth >= spec.min_halfwidth)) {
    throw Error(Errc::InvalidConfig, "bad random track spec");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> amp(static_cast<std::size_t>(spec.harmonics + 1), 0.0);
  std::vector<double> phase(amp.size(), 0.0);
  double total = 0.0;
  for (int k = 2; k <= spec.harmonics + 1; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    amp[idx] = spec.roughness * (0.3 + 0.7 * uniform01(rng)) * 2.0 / k;
    phase[idx] = 2.0 * kPi * uniform01(rng);
    total += amp[idx];
  }
  // Keep the radius positive with room to spare.
  const double shrink = total > 0.6 ? 0.6 / total : 1.0;
  const double w_phase = 2.0 * kPi * uniform01(rng);
  const double w_freq = 1.0 + std::floor(3.0 * uniform01(rng));
  const double radius = spec.mean_radius * (0.8 + 0.4 * uniform01(rng));

  Track t;
  char name[32];
  std::snprintf(name, sizeof name, "random%llu", static_cast<unsigned long long>(seed));
  t.name = name;
  for (int i = 0; i < spec.points; ++i) {
    const double phi = 2.0 * kPi * i / spec.points;
    double r = 1.0;
    for (int k = 2; k <= spec.harmonics + 1; ++k) {
      const auto idx = static_cast<std::size_t>(k - 1);
      r += shrink * amp[idx] * std::cos(k * phi + phase[idx]);
    }
    r *= radius;
    t.points.emplace_back(r * std::cos(phi), r * std::sin(phi));
    const double mix = 0.5 + 0.5 * std::sin(w_freq * phi + w_phase);
    const double hw = spec.min_halfwidth + (spec.max_halfwidth - spec.min_halfwidth) * mix;
    t.halfwidth_left.push_back(hw);
    t.halfwidth_right.push_back(hw);
  }
  t.closed = true;
  validate(t);
  return t;
}

std::vector<Track> random_corpus(int count, std::uint64_t seed, const RandomTrackSpec& spec,
                                 const std::string& prefix) {
  std::vector<Track> out;
  for (int i = 0; i < count; ++i) {
    auto t = random_track(seed + static_cast<std::uint64_t>(i), spec);
    char name[32];
    std::snprintf(name, sizeof name, "%03d", i);
    t.name = prefix + name;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace raceline::synthetic
