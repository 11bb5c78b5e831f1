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

#include <functional>
#include <random>
#include <string>

#include "doctest.h"
#include "raceline/error.hpp"
#include "raceline/synthetic.hpp"
#include "raceline/trackio.hpp"

using namespace raceline;

namespace {

const char* kSquare = "# x_m,y_m,w_tr_right_m,w_tr_left_m\n0,0,2,2\n1,0,2,2\n1,1,2,2\n0,1,2,2\n";

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::Io;
}

void check_equal(const Track& a, const Track& b) {
  CHECK(a.name == b.name);
  CHECK(a.closed == b.closed);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.points[i] == b.points[i]);
    CHECK(a.halfwidth_left[i] == b.halfwidth_left[i]);
    CHECK(a.halfwidth_right[i] == b.halfwidth_right[i]);
  }
}

}  // namespace

TEST_CASE("unit square parses to four closed points") {
  const auto t = parse_track_csv(kSquare);
  REQUIRE(t.size() == 4);
  CHECK(t.closed);
  CHECK(t.points[2] == Vec2(1, 1));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(t.halfwidth_left[i] == 2.0);
    CHECK(t.halfwidth_right[i] == 2.0);
  }
}

TEST_CASE("right and left width columns are not swapped") {
  const auto t = parse_track_csv("0,0,1,3\n10,0,1,3\n10,10,1,3\n");
  CHECK(t.halfwidth_right[0] == 1.0);
  CHECK(t.halfwidth_left[0] == 3.0);
}

TEST_CASE("parse errors") {
  CHECK(code_of([] { parse_track_csv("0,0,2,2\n1,0,2,2\n"); }) == Errc::DegenerateTrack);
  CHECK(code_of([] { parse_track_csv("0,0,-1,2\n1,0,2,2\n1,1,2,2\n"); }) == Errc::NonPositiveWidth);
  CHECK(code_of([] { parse_track_csv("0,0,0,2\n1,0,2,2\n1,1,2,2\n"); }) == Errc::NonPositiveWidth);
  CHECK(code_of([] { parse_track_csv("0,0,2\n1,0,2,2\n1,1,2,2\n"); }) == Errc::MalformedRow);
  CHECK(code_of([] { parse_track_csv("0,0,2,2,5\n1,0,2,2\n1,1,2,2\n"); }) == Errc::MalformedRow);
  CHECK(code_of([] { parse_track_csv("0,zero,2,2\n1,0,2,2\n1,1,2,2\n"); }) == Errc::MalformedRow);
  CHECK(code_of([] { parse_track_csv("0,0,2,2\n0,0,2,2\n1,1,2,2\n0,1,2,2\n"); }) == Errc::DegenerateTrack);
}

TEST_CASE("CRLF line endings and comments are accepted") {
  const auto t = parse_track_csv("# header\r\n0,0,2,2\r\n1,0,2,2\r\n\r\n1,1,2,2\r\n");
  CHECK(t.size() == 3);
}

TEST_CASE("a repeated closing point is dropped") {
  const auto t = parse_track_csv("0,0,2,2\n1,0,2,2\n1,1,2,2\n0,0,2,2\n");
  CHECK(t.size() == 3);
}

TEST_CASE("track round trip") {
  SUBCASE("square") {
    const auto t = parse_track_csv(kSquare, "square");
    check_equal(parse_track_csv(write_track_csv(t)), t);
  }
  SUBCASE("widths keep every digit") {
    const auto t = parse_track_csv("0,0,2.123456789012345,1.000000000000001\n5,0,2,2\n5,5,2,2\n");
    const auto u = parse_track_csv(write_track_csv(t));
    CHECK(u.halfwidth_right[0] == 2.123456789012345);
    CHECK(u.halfwidth_left[0] == 1.000000000000001);
  }
  SUBCASE("open flag") {
    auto t = parse_track_csv(kSquare);
    t.closed = false;
    const auto text = write_track_csv(t);
    CHECK(text.find("# open") != std::string::npos);
    CHECK_FALSE(parse_track_csv(text).closed);
    CHECK(parse_track_csv("# open\n0,0,1,1\n1,0,1,1\n2,0,1,1\n").closed == false);
  }
  SUBCASE("random tracks") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto t = synthetic::random_track(seed);
      check_equal(parse_track_csv(write_track_csv(t)), t);
    }
  }
}

TEST_CASE("raceline csv") {
  SUBCASE("single waypoint") {
    RacingLine line;
    line.w = {0.5};
    line.points = {Vec2(0, 0)};
    const auto text = write_raceline_csv(line);
    CHECK(text.find("0,0,0,0.5\n") != std::string::npos);
  }
  SUBCASE("round trip of 100 random waypoints is bit exact") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1000.0, 1000.0), uw(0.0, 1.0);
    RacingLine line;
    line.source = LineSource::Oracle;
    for (int i = 0; i < 100; ++i) {
      line.points.emplace_back(u(rng), u(rng));
      line.w.push_back(uw(rng));
    }
    const auto back = parse_raceline_csv(write_raceline_csv(line));
    CHECK(back.w == line.w);
    CHECK(back.points == line.points);
    CHECK(back.source == LineSource::Oracle);
  }
  SUBCASE("empty line") {
    CHECK(code_of([] { write_raceline_csv(RacingLine{}); }) == Errc::EmptyLine);
  }
}
