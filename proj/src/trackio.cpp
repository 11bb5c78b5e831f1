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

#include "raceline/trackio.hpp"

#include <cmath>

#include "raceline/error.hpp"
#include "raceline/text.hpp"

namespace raceline {
namespace {

constexpr double kMinSpacing = 1e-9;

std::string row_context(std::size_t line_no) { return "line " + std::to_string(line_no); }

std::string_view source_tag(LineSource s) {
  switch (s) {
    case LineSource::Predicted: return "predicted";
    case LineSource::Oracle: return "oracle";
    case LineSource::External: return "external";
  }
  return "external";
}

}  // namespace

void validate(const Track& track) {
  const auto n = track.points.size();
  if (track.halfwidth_left.size() != n || track.halfwidth_right.size() != n) {
    throw Error(Errc::LengthMismatch, "track half-width arrays do not match point count");
  }
  if (n < 3) throw Error(Errc::DegenerateTrack, "track needs at least 3 points, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double l = track.halfwidth_left[i];
    const double r = track.halfwidth_right[i];
    if (!(l > 0.0) || !(r > 0.0) || !std::isfinite(l) || !std::isfinite(r)) {
      throw Error(Errc::NonPositiveWidth, "point " + std::to_string(i));
    }
    if (!track.points[i].allFinite()) throw Error(Errc::DegenerateTrack, "non-finite point " + std::to_string(i));
  }
  const std::size_t pairs = track.closed ? n : n - 1;
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto& a = track.points[i];
    const auto& b = track.points[(i + 1) % n];
    if ((b - a).norm() <= kMinSpacing) {
      throw Error(Errc::DegenerateTrack, "coincident consecutive points at " + std::to_string(i));
    }
  }
}

Track parse_track_csv(std::string_view text, std::string name) {
  Track track;
  track.name = std::move(name);
  std::size_t line_no = 0;
  for (auto raw : text::lines(text)) {
    ++line_no;
    auto line = text::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = text::trim(line.substr(1));
      if (body == "open") {
        track.closed = false;
      } else if (body.rfind("track:", 0) == 0) {
        track.name = std::string(text::trim(body.substr(6)));
      }
      continue;
    }
    const auto fields = text::split(line, ',');
    if (fields.size() != 4) {
      throw Error(Errc::MalformedRow, row_context(line_no) + ": expected 4 fields, got " +
                                          std::to_string(fields.size()));
    }
    double v[4];
    for (int k = 0; k < 4; ++k) {
      auto parsed = text::parse_double(fields[k]);
      if (!parsed) throw Error(Errc::MalformedRow, row_context(line_no) + ": non-numeric field");
      v[k] = *parsed;
    }
    if (!(v[2] > 0.0) || !(v[3] > 0.0)) {
      throw Error(Errc::NonPositiveWidth, row_context(line_no));
    }
    track.points.emplace_back(v[0], v[1]);
    track.halfwidth_right.push_back(v[2]);
    track.halfwidth_left.push_back(v[3]);
  }
  if (track.closed && track.points.size() > 3 &&
      (track.points.back() - track.points.front()).norm() <= kMinSpacing) {
    track.points.pop_back();
    track.halfwidth_left.pop_back();
    track.halfwidth_right.pop_back();
  }
  validate(track);
  return track;
}

std::string write_track_csv(const Track& track) {
  validate(track);
  std::string out;
  if (!track.name.empty()) out += "# track: " + track.name + "\n";
  if (!track.closed) out += "# open\n";
  out += "# x_m,y_m,w_tr_right_m,w_tr_left_m\n";
  for (std::size_t i = 0; i < track.size(); ++i) {
    out += text::format_double(track.points[i].x());
    out += ',';
    out += text::format_double(track.points[i].y());
    out += ',';
    out += text::format_double(track.halfwidth_right[i]);
    out += ',';
    out += text::format_double(track.halfwidth_left[i]);
    out += '\n';
  }
  return out;
}

std::string write_raceline_csv(const RacingLine& line) {
  if (line.w.empty()) throw Error(Errc::EmptyLine, "racing line has no waypoints");
  if (line.points.size() != line.w.size()) {
    throw Error(Errc::LengthMismatch, "racing line points and w differ in length");
  }
  std::string out = "# source: ";
  out += source_tag(line.source);
  out += "\n# index,x_m,y_m,w_frac\n";
  for (std::size_t i = 0; i < line.w.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += text::format_double(line.points[i].x());
    out += ',';
    out += text::format_double(line.points[i].y());
    out += ',';
    out += text::format_double(line.w[i]);
    out += '\n';
  }
  return out;
}

RacingLine parse_raceline_csv(std::string_view content) {
  RacingLine line;
  std::size_t line_no = 0;
  for (auto raw : text::lines(content)) {
    ++line_no;
    auto row = text::trim(raw);
    if (row.empty()) continue;
    if (row.front() == '#') {
      auto body = text::trim(row.substr(1));
      if (body == "source: predicted") line.source = LineSource::Predicted;
      if (body == "source: oracle") line.source = LineSource::Oracle;
      continue;
    }
    const auto fields = text::split(row, ',');
    if (fields.size() != 4) throw Error(Errc::MalformedRow, row_context(line_no) + ": expected 4 fields");
    auto index = text::parse_int(fields[0]);
    auto x = text::parse_double(fields[1]);
    auto y = text::parse_double(fields[2]);
    auto w = text::parse_double(fields[3]);
    if (!index || !x || !y || !w) throw Error(Errc::MalformedRow, row_context(line_no) + ": non-numeric field");
    if (*index != static_cast<long long>(line.w.size())) {
      throw Error(Errc::MalformedRow, row_context(line_no) + ": indices must be 0,1,2,...");
    }
    line.points.emplace_back(*x, *y);
    line.w.push_back(*w);
  }
  if (line.w.empty()) throw Error(Errc::EmptyLine, "no waypoints in raceline file");
  return line;
}

}  // namespace raceline
