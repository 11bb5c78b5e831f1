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

#include "raceline/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "raceline/error.hpp"

namespace raceline {
namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

// Cumulative arc length with one entry per vertex, plus the closing vertex
// for closed tracks.
std::vector<double> cumulative_length(const Polyline& pts, bool closed) {
  const std::size_t n = pts.size();
  const std::size_t segs = closed ? n : n - 1;
  std::vector<double> cum(segs + 1, 0.0);
  for (std::size_t i = 0; i < segs; ++i) {
    cum[i + 1] = cum[i] + (pts[(i + 1) % n] - pts[i]).norm();
  }
  return cum;
}

// Nearest forward hit of the ray origin + t * dir (t > 0) with the boundary
// polyline segments [first, last) (indices wrap when cyclic).
std::optional<double> ray_hit(const Vec2& origin, const Vec2& dir, const Polyline& boundary,
                              long first, long last, bool cyclic) {
  const long n = static_cast<long>(boundary.size());
  std::optional<double> best;
  for (long k = first; k < last; ++k) {
    long a = k;
    long b = k + 1;
    if (cyclic) {
      a = ((a % n) + n) % n;
      b = ((b % n) + n) % n;
    } else if (a < 0 || b >= n) {
      continue;
    }
    const Vec2 e = boundary[b] - boundary[a];
    const double den = cross(dir, e);
    if (std::abs(den) < 1e-15) continue;
    const Vec2 ao = boundary[a] - origin;
    const double t = cross(ao, e) / den;
    const double u = cross(ao, dir) / den;
    if (t > 1e-9 && u >= -1e-12 && u <= 1.0 + 1e-12) {
      if (!best || t < *best) best = t;
    }
  }
  return best;
}

// Penetration of a crossing: distance from the hit to the nearest segment end,
// minimized over both segments.
double crossing_depth(const Normal& a, const Normal& b, const SegmentHit& h) {
  const double da = std::min(h.t, 1.0 - h.t) * a.length;
  const double db = std::min(h.u, 1.0 - h.u) * b.length;
  return std::min(da, db);
}

}  // namespace

Track resample_centerline(const Track& track, double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(Errc::ZeroSpacing, "spacing must be positive");
  }
  validate(track);
  const std::size_t n = track.size();
  const auto cum = cumulative_length(track.points, track.closed);
  const double total = cum.back();

  std::size_t count = 0;
  double step = 0.0;
  if (track.closed) {
    if (total < 3.0 * spacing) {
      throw Error(Errc::DegenerateTrack, "perimeter shorter than three spacings");
    }
    const auto segments = static_cast<std::size_t>(std::llround(total / spacing));
    count = segments;
    step = total / static_cast<double>(segments);
  } else {
    const auto segments = static_cast<std::size_t>(std::llround(total / spacing));
    if (segments < 2) throw Error(Errc::DegenerateTrack, "open track shorter than two spacings");
    count = segments + 1;
    step = total / static_cast<double>(segments);
  }

  Track out;
  out.name = track.name;
  out.closed = track.closed;
  out.points.reserve(count);
  out.halfwidth_left.reserve(count);
  out.halfwidth_right.reserve(count);

  std::size_t seg = 0;
  const std::size_t segs = cum.size() - 1;
  for (std::size_t k = 0; k < count; ++k) {
    if (!track.closed && k + 1 == count) {
      out.points.push_back(track.points.back());
      out.halfwidth_left.push_back(track.halfwidth_left.back());
      out.halfwidth_right.push_back(track.halfwidth_right.back());
      break;
    }
    const double s = static_cast<double>(k) * step;
    while (seg + 1 < segs && cum[seg + 1] <= s) ++seg;
    const std::size_t a = seg;
    const std::size_t b = (seg + 1) % n;
    const double len = cum[seg + 1] - cum[seg];
    const double t = std::clamp((s - cum[seg]) / len, 0.0, 1.0);
    out.points.push_back(track.points[a] + t * (track.points[b] - track.points[a]));
    out.halfwidth_left.push_back(track.halfwidth_left[a] +
                                 t * (track.halfwidth_left[b] - track.halfwidth_left[a]));
    out.halfwidth_right.push_back(track.halfwidth_right[a] +
                                  t * (track.halfwidth_right[b] - track.halfwidth_right[a]));
  }
  validate(out);
  return out;
}

NormalSet build_normals(const Track& track) {
  validate(track);
  const std::size_t n = track.size();
  const bool cyclic = track.closed;
  NormalSet ns;
  ns.cyclic = cyclic;
  ns.normals.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = cyclic ? (i + 1) % n : std::min(i + 1, n - 1);
    const std::size_t prev = cyclic ? (i + n - 1) % n : (i == 0 ? 0 : i - 1);
    const Vec2 d = track.points[next] - track.points[prev];
    const double norm = d.norm();
    if (!(norm > 1e-12)) throw Error(Errc::DegenerateTangent, "station " + std::to_string(i));
    Normal& nm = ns.normals[i];
    nm.center = track.points[i];
    nm.tangent = d / norm;
    const Vec2 left = perp(nm.tangent);
    nm.left_end = nm.center + track.halfwidth_left[i] * left;
    nm.right_end = nm.center - track.halfwidth_right[i] * left;
    nm.length = (nm.right_end - nm.left_end).norm();
    nm.theta = 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!cyclic && i == 0) continue;
    const Vec2& t0 = ns.normals[(i + n - 1) % n].tangent;
    const Vec2& t1 = ns.normals[i].tangent;
    double a = std::atan2(cross(t0, t1), t0.dot(t1));
    if (a == -std::numbers::pi) a = std::numbers::pi;
    ns.normals[i].alpha = a;
  }

  const auto cum = cumulative_length(track.points, cyclic);
  ns.spacing = cum.back() / static_cast<double>(cum.size() - 1);
  return ns;
}

std::optional<SegmentHit> segment_intersection(const Vec2& a, const Vec2& b, const Vec2& c,
                                               const Vec2& d) {
  const Vec2 r = b - a;
  const Vec2 s = d - c;
  const double den = cross(r, s);
  const Vec2 ca = c - a;
  const double scale = r.squaredNorm() * s.squaredNorm();
  if (den * den <= 1e-24 * scale) {
    // Parallel; only collinear overlap counts.
    if (std::abs(cross(ca, r)) > 1e-12 * std::sqrt(r.squaredNorm()) * (1.0 + ca.norm())) {
      return std::nullopt;
    }
    const double rr = r.squaredNorm();
    if (rr == 0.0) return std::nullopt;
    double t0 = ca.dot(r) / rr;
    double t1 = (d - a).dot(r) / rr;
    if (t0 > t1) std::swap(t0, t1);
    const double lo = std::max(0.0, t0);
    const double hi = std::min(1.0, t1);
    if (lo > hi) return std::nullopt;
    const double t = 0.5 * (lo + hi);
    const Vec2 p = a + t * r;
    const double ss = s.squaredNorm();
    const double u = ss > 0.0 ? (p - c).dot(s) / ss : 0.0;
    return SegmentHit{t, std::clamp(u, 0.0, 1.0)};
  }
  const double t = cross(ca, s) / den;
  const double u = cross(ca, r) / den;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return SegmentHit{t, u};
}

std::vector<NormalPairHit> intersecting_pairs(const NormalSet& ns) {
  const std::size_t n = ns.size();
  struct Box {
    double xmin, xmax, ymin, ymax;
    std::size_t index;
  };
  std::vector<Box> boxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nm = ns[i];
    boxes[i] = {std::min(nm.left_end.x(), nm.right_end.x()), std::max(nm.left_end.x(), nm.right_end.x()),
                std::min(nm.left_end.y(), nm.right_end.y()), std::max(nm.left_end.y(), nm.right_end.y()), i};
  }
  std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
    return a.xmin < b.xmin || (a.xmin == b.xmin && a.index < b.index);
  });
  std::vector<NormalPairHit> out;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n && boxes[q].xmin <= boxes[p].xmax; ++q) {
      if (boxes[q].ymin > boxes[p].ymax || boxes[q].ymax < boxes[p].ymin) continue;
      std::size_t i = boxes[p].index;
      std::size_t j = boxes[q].index;
      if (i > j) std::swap(i, j);
      auto hit = segment_intersection(ns[i].left_end, ns[i].right_end, ns[j].left_end, ns[j].right_end);
      if (hit) out.push_back({i, j, *hit});
    }
  }
  std::sort(out.begin(), out.end(), [](const NormalPairHit& a, const NormalPairHit& b) {
    return a.i < b.i || (a.i == b.i && a.j < b.j);
  });
  return out;
}

NormalSet resolve_intersections(const NormalSet& input, double max_tilt, double step) {
  if (!(step > 0.0) || !(max_tilt >= 0.0)) {
    throw Error(Errc::InvalidConfig, "tilt step must be positive and max tilt non-negative");
  }
  NormalSet ns = input;
  const std::size_t n = ns.size();
  const Polyline left0 = left_boundary(input);
  const Polyline right0 = right_boundary(input);
  constexpr long kSearch = 3;

  // Each iteration changes two tilts by one step, so this bounds any
  // non-cycling sequence of repairs.
  const std::size_t max_iterations = 4 * n * static_cast<std::size_t>(std::ceil(max_tilt / step) + 1) + 16;

  for (std::size_t iter = 0;; ++iter) {
    const auto pairs = intersecting_pairs(ns);
    if (pairs.empty()) return ns;
    if (iter >= max_iterations) throw Error(Errc::Unresolvable, "repair did not converge");

    const NormalPairHit* worst = &pairs.front();
    double worst_depth = crossing_depth(ns[worst->i], ns[worst->j], worst->hit);
    for (const auto& p : pairs) {
      const double depth = crossing_depth(ns[p.i], ns[p.j], p.hit);
      if (depth > worst_depth) {
        worst = &p;
        worst_depth = depth;
      }
    }

    std::size_t behind = worst->i;
    std::size_t ahead = worst->j;
    if (ns.cyclic && ahead - behind > n / 2) std::swap(behind, ahead);
    const Vec2 crossing = ns[worst->i].left_end + worst->hit.t * (ns[worst->i].right_end - ns[worst->i].left_end);

    for (const std::size_t k : {behind, ahead}) {
      Normal& nm = ns[k];
      const bool left_side = (crossing - nm.center).dot(nm.left_end - nm.center) > 0.0;
      const Vec2 arm = (left_side ? nm.left_end : nm.right_end) - nm.center;
      // Positive rotation moves this arm's end along +tangent when s > 0.
      const double s = perp(arm).dot(nm.tangent) >= 0.0 ? 1.0 : -1.0;
      const double delta = (k == behind ? -s : s) * step;
      const double tilt = nm.theta + delta;
      if (std::abs(tilt) > max_tilt + 1e-12) {
        throw Error(Errc::Unresolvable, "normal " + std::to_string(k) + " needs more than max tilt");
      }
      nm.theta = tilt;
      const Vec2 dir = rotate(perp(nm.tangent), tilt);
      const double c = std::cos(tilt);
      const long ki = static_cast<long>(k);
      const auto hl = ray_hit(nm.center, dir, left0, ki - kSearch, ki + kSearch, ns.cyclic);
      const auto hr = ray_hit(nm.center, -dir, right0, ki - kSearch, ki + kSearch, ns.cyclic);
      const double dl = hl ? *hl : (input[k].left_end - nm.center).norm() / c;
      const double dr = hr ? *hr : (input[k].right_end - nm.center).norm() / c;
      nm.left_end = nm.center + dl * dir;
      nm.right_end = nm.center - dr * dir;
      nm.length = (nm.right_end - nm.left_end).norm();
    }
  }
}

NormalSet prepare_normals(const Track& track, const GeometryConfig& cfg) {
  return resolve_intersections(build_normals(resample_centerline(track, cfg.spacing)), cfg.max_tilt,
                               cfg.tilt_step);
}

Vec2 waypoint_to_world(const Normal& n, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw Error(Errc::OutOfRange, "waypoint fraction outside [0, 1]");
  return n.left_end + w * (n.right_end - n.left_end);
}

Polyline waypoints_to_world(const NormalSet& ns, const std::vector<double>& w) {
  if (w.size() != ns.size()) throw Error(Errc::LengthMismatch, "one waypoint per normal required");
  Polyline out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.push_back(waypoint_to_world(ns[i], w[i]));
  return out;
}

std::vector<double> project_line_to_waypoints(const NormalSet& ns, const Polyline& line, bool line_closed) {
  if (line.size() < 2) throw Error(Errc::NoIntersection, "line needs at least two points");
  const std::size_t m = line.size();
  const std::size_t segs = line_closed ? m : m - 1;
  std::vector<double> w(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& nm = ns[i];
    const double xmin = std::min(nm.left_end.x(), nm.right_end.x());
    const double xmax = std::max(nm.left_end.x(), nm.right_end.x());
    const double ymin = std::min(nm.left_end.y(), nm.right_end.y());
    const double ymax = std::max(nm.left_end.y(), nm.right_end.y());
    std::vector<double> hits;
    for (std::size_t k = 0; k < segs; ++k) {
      const Vec2& a = line[k];
      const Vec2& b = line[(k + 1) % m];
      if (std::max(a.x(), b.x()) < xmin || std::min(a.x(), b.x()) > xmax ||
          std::max(a.y(), b.y()) < ymin || std::min(a.y(), b.y()) > ymax) {
        continue;
      }
      auto hit = segment_intersection(nm.left_end, nm.right_end, a, b);
      if (!hit) continue;
      const bool seen = std::any_of(hits.begin(), hits.end(),
                                    [&](double t) { return std::abs(t - hit->t) < 1e-9; });
      if (!seen) hits.push_back(hit->t);
    }
    if (hits.empty()) throw Error(Errc::NoIntersection, "line misses normal " + std::to_string(i));
    if (hits.size() > 1) throw Error(Errc::MultipleIntersections, "normal " + std::to_string(i));
    w[i] = std::clamp(hits.front(), 0.0, 1.0);
  }
  return w;
}

double signed_area(const Polyline& polygon) {
  double a = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(polygon[i], polygon[(i + 1) % n]);
  return 0.5 * a;
}

namespace {

bool point_in_polygon(const Vec2& p, const Polyline& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

Vec2 closest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

}  // namespace

Track reconstruct_from_boundaries(const Polyline& inner, const Polyline& outer) {
  if (inner.size() < 3 || outer.size() < 3) {
    throw Error(Errc::DegenerateTrack, "boundaries need at least 3 points each");
  }
  for (std::size_t i = 0; i < inner.size(); ++i) {
    for (std::size_t k = 0; k < outer.size(); ++k) {
      if (segment_intersection(inner[i], inner[(i + 1) % inner.size()], outer[k],
                               outer[(k + 1) % outer.size()])) {
        throw Error(Errc::BoundariesCross, "boundary segments intersect");
      }
    }
  }
  if (!std::all_of(inner.begin(), inner.end(), [&](const Vec2& p) { return point_in_polygon(p, outer); })) {
    throw Error(Errc::BoundariesCross, "inner boundary is not inside the outer boundary");
  }

  const auto cum = cumulative_length(outer, true);
  const double perimeter = cum.back();
  const std::size_t dense = std::max<std::size_t>(1000, 4 * outer.size());
  const double step = perimeter / static_cast<double>(dense);

  Track track;
  track.closed = true;
  std::size_t seg = 0;
  for (std::size_t k = 0; k < dense; ++k) {
    const double s = static_cast<double>(k) * step;
    while (seg + 1 < outer.size() && cum[seg + 1] <= s) ++seg;
    const Vec2& a = outer[seg];
    const Vec2& b = outer[(seg + 1) % outer.size()];
    const Vec2 q = a + ((s - cum[seg]) / (cum[seg + 1] - cum[seg])) * (b - a);

    Vec2 best = inner.front();
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < inner.size(); ++i) {
      const Vec2 c = closest_on_segment(q, inner[i], inner[(i + 1) % inner.size()]);
      const double d2 = (c - q).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = c;
      }
    }
    const double half = 0.5 * std::sqrt(best_d2);
    if (!(half > 1e-9)) throw Error(Errc::BoundariesCross, "zero-width correspondence");
    const Vec2 mid = 0.5 * (q + best);
    if (!track.points.empty() && (mid - track.points.back()).norm() <= 1e-6) continue;
    track.points.push_back(mid);
    track.halfwidth_left.push_back(half);
    track.halfwidth_right.push_back(half);
  }
  while (track.points.size() > 3 && (track.points.back() - track.points.front()).norm() <= 1e-6) {
    track.points.pop_back();
    track.halfwidth_left.pop_back();
    track.halfwidth_right.pop_back();
  }
  validate(track);
  return track;
}

Polyline left_boundary(const NormalSet& ns) {
  Polyline out;
  out.reserve(ns.size());
  for (const auto& n : ns.normals) out.push_back(n.left_end);
  return out;
}

Polyline right_boundary(const NormalSet& ns) {
  Polyline out;
  out.reserve(ns.size());
  for (const auto& n : ns.normals) out.push_back(n.right_end);
  return out;
}

Polyline centerline(const NormalSet& ns) {
  Polyline out;
  out.reserve(ns.size());
  for (const auto& n : ns.normals) out.push_back(n.center);
  return out;
}

}  // namespace raceline
