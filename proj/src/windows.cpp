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

#include "raceline/windows.hpp"

#include "raceline/error.hpp"
#include "raceline/text.hpp"

namespace raceline {

std::vector<FeatureRow> encode_features(const NormalSet& ns, double l_ref) {
  if (!(l_ref > 0.0)) throw Error(Errc::InvalidConfig, "l_ref must be positive");
  std::vector<FeatureRow> rows;
  rows.reserve(ns.size());
  for (const auto& n : ns.normals) rows.push_back({n.length / l_ref, n.alpha, n.theta});
  return rows;
}

std::vector<Window> make_windows(std::span<const FeatureRow> features, std::span<const double> targets,
                                 int foresight, int sampling, bool cyclic) {
  if (foresight < 0 || sampling < 0 || sampling > foresight) {
    throw Error(Errc::InvalidConfig, "need 0 <= sampling <= foresight");
  }
  const auto n = static_cast<long>(features.size());
  const long f = foresight;
  const long s = sampling;
  if (!targets.empty() && static_cast<long>(targets.size()) != n) {
    throw Error(Errc::LengthMismatch, "targets must match feature rows");
  }
  if (n < 2 * f + 1) {
    throw Error(Errc::TooShort, std::to_string(n) + " normals cannot hold a window of " +
                                    std::to_string(2 * f + 1));
  }
  const long first = cyclic ? 0 : f;
  const long last = cyclic ? n : n - f;
  auto wrap = [n](long i) { return static_cast<std::size_t>(((i % n) + n) % n); };

  std::vector<Window> out;
  out.reserve(static_cast<std::size_t>(last - first));
  for (long i = first; i < last; ++i) {
    Window win;
    win.center_index = static_cast<std::size_t>(i);
    win.features.resize(kFeaturesPerNormal * (2 * f + 1));
    for (long k = -f; k <= f; ++k) {
      const auto& row = features[wrap(i + k)];
      const long base = kFeaturesPerNormal * (k + f);
      win.features[base] = row.l_norm;
      win.features[base + 1] = row.alpha;
      win.features[base + 2] = row.theta;
    }
    if (!targets.empty()) {
      win.targets.resize(2 * s + 1);
      for (long k = -s; k <= s; ++k) {
        const double w = targets[wrap(i + k)];
        if (!(w >= 0.0 && w <= 1.0)) throw Error(Errc::OutOfRange, "target outside [0, 1]");
        win.targets[k + s] = w;
      }
    }
    out.push_back(std::move(win));
  }
  return out;
}

Eigen::MatrixXd feature_matrix(std::span<const Window> windows) {
  if (windows.empty()) return {};
  Eigen::MatrixXd x(windows.front().features.size(), static_cast<Eigen::Index>(windows.size()));
  for (std::size_t c = 0; c < windows.size(); ++c) {
    if (windows[c].features.size() != x.rows()) throw Error(Errc::ShapeMismatch, "ragged window features");
    x.col(static_cast<Eigen::Index>(c)) = windows[c].features;
  }
  return x;
}

Eigen::MatrixXd target_matrix(std::span<const Window> windows) {
  if (windows.empty()) return {};
  Eigen::MatrixXd y(windows.front().targets.size(), static_cast<Eigen::Index>(windows.size()));
  for (std::size_t c = 0; c < windows.size(); ++c) {
    if (windows[c].targets.size() != y.rows()) throw Error(Errc::ShapeMismatch, "ragged window targets");
    y.col(static_cast<Eigen::Index>(c)) = windows[c].targets;
  }
  return y;
}

std::string write_windows_csv(std::span<const Window> windows, const WindowSpec& spec) {
  std::string out = "# windows f=" + std::to_string(spec.foresight) + " s=" + std::to_string(spec.sampling) +
                    " l_ref=" + text::format_double(spec.l_ref) + "\n";
  out += "# ordering ";
  out += kFeatureOrdering;
  out += "\n# center_index,f,s,features...,targets...\n";
  const auto in = spec.input_size();
  const auto outs = spec.output_size();
  for (const auto& win : windows) {
    if (win.features.size() != in || win.targets.size() != outs) {
      throw Error(Errc::ShapeMismatch, "window does not match spec");
    }
    out += std::to_string(win.center_index) + ',' + std::to_string(spec.foresight) + ',' +
           std::to_string(spec.sampling);
    for (Eigen::Index k = 0; k < win.features.size(); ++k) out += ',' + text::format_double(win.features[k]);
    for (Eigen::Index k = 0; k < win.targets.size(); ++k) out += ',' + text::format_double(win.targets[k]);
    out += '\n';
  }
  return out;
}

WindowFile parse_windows_csv(std::string_view content) {
  WindowFile file;
  bool have_header = false;
  std::size_t line_no = 0;
  for (auto raw : text::lines(content)) {
    ++line_no;
    auto line = text::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = text::trim(line.substr(1));
      if (body.rfind("windows ", 0) == 0) {
        for (auto tok : text::split(body.substr(8), ' ')) {
          tok = text::trim(tok);
          const auto eq = tok.find('=');
          if (eq == std::string_view::npos) continue;
          const auto key = tok.substr(0, eq);
          const auto val = tok.substr(eq + 1);
          if (key == "f") file.spec.foresight = static_cast<int>(text::parse_int(val).value_or(-1));
          if (key == "s") file.spec.sampling = static_cast<int>(text::parse_int(val).value_or(-1));
          if (key == "l_ref") file.spec.l_ref = text::parse_double(val).value_or(-1.0);
        }
        have_header = true;
      } else if (body.rfind("ordering ", 0) == 0 && text::trim(body.substr(9)) != kFeatureOrdering) {
        throw Error(Errc::VersionMismatch, "unknown feature ordering");
      }
      continue;
    }
    if (!have_header) throw Error(Errc::CorruptFile, "windows file lacks its header");
    const auto fields = text::split(line, ',');
    const auto in = static_cast<std::size_t>(file.spec.input_size());
    const auto outs = static_cast<std::size_t>(file.spec.output_size());
    if (fields.size() != 3 + in + outs) {
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": wrong field count");
    }
    auto idx = text::parse_int(fields[0]);
    auto f = text::parse_int(fields[1]);
    auto s = text::parse_int(fields[2]);
    if (!idx || *idx < 0 || f != file.spec.foresight || s != file.spec.sampling) {
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": bad index or f/s");
    }
    Window win;
    win.center_index = static_cast<std::size_t>(*idx);
    win.features.resize(static_cast<Eigen::Index>(in));
    win.targets.resize(static_cast<Eigen::Index>(outs));
    for (std::size_t k = 0; k < in + outs; ++k) {
      auto v = text::parse_double(fields[3 + k]);
      if (!v) throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": non-numeric field");
      if (k < in) {
        win.features[static_cast<Eigen::Index>(k)] = *v;
      } else {
        win.targets[static_cast<Eigen::Index>(k - in)] = *v;
      }
    }
    file.windows.push_back(std::move(win));
  }
  if (!have_header) throw Error(Errc::CorruptFile, "windows file lacks its header");
  if (file.spec.foresight < 0 || file.spec.sampling < 0 || !(file.spec.l_ref > 0.0)) {
    throw Error(Errc::CorruptFile, "bad windows header");
  }
  return file;
}

}  // namespace raceline
