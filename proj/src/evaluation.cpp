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

#include "raceline/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "raceline/error.hpp"

namespace raceline {
namespace {

double circumcurvature(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 u = b - a;
  const Vec2 v = c - b;
  const double den = u.norm() * v.norm() * (c - a).norm();
  if (!(den > 0.0)) return 0.0;
  return 2.0 * std::abs(u.x() * v.y() - u.y() * v.x()) / den;
}

}  // namespace

std::vector<double> lateral_errors(const RacingLine& pred, const RacingLine& ref, const NormalSet& ns) {
  if (pred.w.size() != ref.w.size() || pred.w.size() != ns.size()) {
    throw Error(Errc::LengthMismatch, "lines and normals differ in length");
  }
  std::vector<double> e(ns.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = (pred.w[i] - ref.w[i]) * ns[i].length;
  return e;
}

double abs_quantile(std::span<const double> errors, double p) {
  if (errors.empty()) throw Error(Errc::Empty, "no errors");
  std::vector<double> a(errors.size());
  std::transform(errors.begin(), errors.end(), a.begin(), [](double x) { return std::abs(x); });
  std::sort(a.begin(), a.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(a.size())));
  return a[std::clamp<std::size_t>(rank, 1, a.size()) - 1];
}

ErrorReport summary_metrics(std::span<const double> errors) {
  if (errors.empty()) throw Error(Errc::Empty, "no errors");
  ErrorReport r;
  r.per_normal_error.assign(errors.begin(), errors.end());
  // Sums run on e / max|e|, so a constant series gives exactly +-1 terms
  // and its offset comes back unchanged in all three metrics.
  double scale = 0.0;
  for (double e : errors) scale = std::max(scale, std::abs(e));
  if (scale > 0.0) {
    double sq = 0.0, ab = 0.0, sum = 0.0;
    for (double e : errors) {
      const double u = e / scale;
      sq += u * u;
      ab += std::abs(u);
      sum += u;
    }
    const auto n = static_cast<double>(errors.size());
    r.rmse = scale * std::sqrt(sq / n);
    r.mae = scale * (ab / n);
    r.mean_error = scale * (sum / n);
  }
  r.ci50 = abs_quantile(errors, 0.50);
  r.ci95 = abs_quantile(errors, 0.95);
  return r;
}

std::vector<double> discrete_curvature(const Polyline& line, bool cyclic) {
  const std::size_t n = line.size();
  std::vector<double> k(n, 0.0);
  if (n < 3) return k;
  for (std::size_t i = 0; i < n; ++i) {
    if (!cyclic && (i == 0 || i + 1 == n)) continue;
    k[i] = circumcurvature(line[(i + n - 1) % n], line[i], line[(i + 1) % n]);
  }
  return k;
}

std::vector<std::size_t> find_apexes(const Polyline& reference, bool cyclic, const ApexConfig& cfg) {
  const auto k = discrete_curvature(reference, cyclic);
  const auto n = static_cast<long>(k.size());
  std::vector<std::size_t> apexes;
  for (long i = 0; i < n; ++i) {
    const double ki = k[static_cast<std::size_t>(i)];
    if (!(ki >= cfg.min_curvature)) continue;
    auto neighbour = [&](long j) -> std::optional<double> {
      if (cyclic) {
        j = ((j % n) + n) % n;
      } else if (j < 0 || j >= n) {
        return std::nullopt;
      }
      if (j == i) return std::nullopt;
      return k[static_cast<std::size_t>(j)];
    };
    bool peak = true;
    for (long d = 1; d <= cfg.radius && peak; ++d) {
      const auto before = neighbour(i - d);
      const auto after = neighbour(i + d);
      if ((before && *before >= ki) || (after && *after > ki)) peak = false;
    }
    if (peak) apexes.push_back(static_cast<std::size_t>(i));
  }
  return apexes;
}

std::optional<double> apex_error(const RacingLine& pred, const RacingLine& ref, const NormalSet& ns,
                                 const ApexConfig& cfg) {
  const auto e = lateral_errors(pred, ref, ns);
  const auto apexes = find_apexes(ref.points, ns.cyclic, cfg);
  if (apexes.empty()) return std::nullopt;
  double sum = 0.0;
  for (auto i : apexes) sum += std::abs(e[i]);
  return sum / static_cast<double>(apexes.size());
}

ErrorReport evaluate_line(const RacingLine& pred, const RacingLine& ref, const NormalSet& ns, const ApexConfig& cfg) {
  auto report = summary_metrics(lateral_errors(pred, ref, ns));
  report.apex_indices = find_apexes(ref.points, ns.cyclic, cfg);
  if (!report.apex_indices.empty()) {
    double sum = 0.0;
    for (auto i : report.apex_indices) sum += std::abs(report.per_normal_error[i]);
    report.apex_error_mae = sum / static_cast<double>(report.apex_indices.size());
  }
  return report;
}

ErrorReport aggregate(std::span<const ErrorReport> reports) {
  std::vector<double> pooled;
  double apex_sum = 0.0;
  std::size_t apex_count = 0;
  for (const auto& r : reports) {
    for (auto i : r.apex_indices) {
      apex_sum += std::abs(r.per_normal_error.at(i));
      ++apex_count;
    }
    pooled.insert(pooled.end(), r.per_normal_error.begin(), r.per_normal_error.end());
  }
  auto out = summary_metrics(pooled);
  if (apex_count > 0) out.apex_error_mae = apex_sum / static_cast<double>(apex_count);
  std::vector<double> lat;
  for (const auto& r : reports) {
    if (r.latency) lat.push_back(*r.latency);
  }
  if (!lat.empty()) {
    double s = 0.0;
    for (double v : lat) s += v;
    out.latency = s / static_cast<double>(lat.size());
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(Errc::Empty, "no values");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

LaplaceFit laplace_fit(std::span<const double> errors) {
  if (errors.empty()) throw Error(Errc::Empty, "no errors");
  LaplaceFit fit;
  fit.location = median({errors.begin(), errors.end()});
  for (double e : errors) fit.scale += std::abs(e - fit.location);
  fit.scale /= static_cast<double>(errors.size());
  return fit;
}

LatencyReport measure_latency(const nn::Mlp<double>& model, const Track& track, int repetitions,
                              double vehicle_width, const PredictOptions& options) {
  if (repetitions < 1) throw Error(Errc::InvalidConfig, "repetitions must be >= 1");
  std::vector<double> total, geometry, network;
  LatencyReport report;
  for (int r = 0; r < repetitions; ++r) {
    StageTimes times;
    auto opts = options;
    opts.timing = &times;
    const auto p = predict_line(model, track, vehicle_width, opts);
    report.normal_count = p.normals.size();
    total.push_back(times.total);
    geometry.push_back(times.geometry + times.windows);
    network.push_back(times.network);
  }
  report.median_total = median(total);
  report.median_geometry = median(geometry);
  report.median_network = median(network);
  report.repetitions = repetitions;
  report.jobs = options.jobs;
  report.hardware_threads = std::thread::hardware_concurrency();
  return report;
}

}  // namespace raceline
