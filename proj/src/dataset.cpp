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

#include "raceline/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "raceline/text.hpp"

namespace raceline {

void AugmentSpec::validate() const {
  if (scales.empty()) throw Error(Errc::InvalidConfig, "augmentation needs at least one scale");
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(Errc::InvalidConfig, "scales must be positive");
  }
  if (std::find(scales.begin(), scales.end(), 1.0) == scales.end()) {
    throw Error(Errc::InvalidConfig, "scales must include 1 so the identity is kept");
  }
}

Track scale_track(const Track& track, double factor) {
  Track out = track;
  for (auto& p : out.points) p *= factor;
  for (auto& w : out.halfwidth_left) w *= factor;
  for (auto& w : out.halfwidth_right) w *= factor;
  return out;
}

Track flip_track(const Track& track) {
  Track out = track;
  for (auto& p : out.points) p.y() = -p.y();
  std::swap(out.halfwidth_left, out.halfwidth_right);
  return out;
}

Track reverse_track(const Track& track) {
  Track out = track;
  if (track.closed) {
    std::reverse(out.points.begin() + 1, out.points.end());
    std::reverse(out.halfwidth_left.begin() + 1, out.halfwidth_left.end());
    std::reverse(out.halfwidth_right.begin() + 1, out.halfwidth_right.end());
  } else {
    std::reverse(out.points.begin(), out.points.end());
    std::reverse(out.halfwidth_left.begin(), out.halfwidth_left.end());
    std::reverse(out.halfwidth_right.begin(), out.halfwidth_right.end());
  }
  std::swap(out.halfwidth_left, out.halfwidth_right);
  return out;
}

std::string transform_tag(double scale, bool flip, bool reverse) {
  std::string tag = "s" + text::format_double(scale);
  if (flip) tag += "-flip";
  if (reverse) tag += "-rev";
  return tag;
}

std::vector<AugmentedTrack> augment_track(const Track& track, const AugmentSpec& spec) {
  spec.validate();
  validate(track);
  std::vector<double> scales = spec.scales;
  // Identity first, remaining scales in the given order.
  std::stable_partition(scales.begin(), scales.end(), [](double s) { return s == 1.0; });
  std::vector<AugmentedTrack> out;
  for (double s : scales) {
    const Track scaled = s == 1.0 ? track : scale_track(track, s);
    for (bool flip : {false, true}) {
      if (flip && !spec.flip) continue;
      const Track flipped = flip ? flip_track(scaled) : scaled;
      for (bool rev : {false, true}) {
        if (rev && !spec.reverse) continue;
        AugmentedTrack a;
        a.track = rev ? reverse_track(flipped) : flipped;
        a.family = track.name;
        a.tag = transform_tag(s, flip, rev);
        a.track.name = track.name + "__" + a.tag;
        out.push_back(std::move(a));
      }
    }
  }
  return out;
}

void SplitSpec::validate() const {
  if (!(train_frac >= 0.0 && val_frac >= 0.0 && test_frac >= 0.0)) {
    throw Error(Errc::InvalidConfig, "split fractions must be non-negative");
  }
  if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
    throw Error(Errc::InvalidConfig, "split fractions must sum to 1");
  }
}

Split split_dataset(const std::vector<std::string>& families, const SplitSpec& spec) {
  spec.validate();
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& f : families) {
    if (seen.insert(f).second) ids.push_back(f);
  }
  if (ids.size() < 3) throw Error(Errc::TooFewFamilies, "need at least 3 families to split");
  std::sort(ids.begin(), ids.end());
  deterministic_shuffle(ids, spec.seed);

  const auto n = static_cast<double>(ids.size());
  auto n_train = static_cast<std::size_t>(std::llround(spec.train_frac * n));
  auto n_val = static_cast<std::size_t>(std::llround(spec.val_frac * n));
  n_train = std::min(n_train, ids.size());
  n_val = std::min(n_val, ids.size() - n_train);

  Split split;
  split.train.assign(ids.begin(), ids.begin() + static_cast<long>(n_train));
  split.validation.assign(ids.begin() + static_cast<long>(n_train),
                          ids.begin() + static_cast<long>(n_train + n_val));
  split.test.assign(ids.begin() + static_cast<long>(n_train + n_val), ids.end());
  return split;
}

std::string write_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out = "# family_id,transform_tag,split,track_path,targets_path\n";
  for (const auto& e : entries) {
    out += e.family + ',' + e.tag + ',' + e.split + ',' + e.track_path + ',' + e.targets_path + '\n';
  }
  return out;
}

std::vector<ManifestEntry> parse_manifest(std::string_view content) {
  std::vector<ManifestEntry> out;
  std::size_t line_no = 0;
  for (auto raw : text::lines(content)) {
    ++line_no;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto f = text::split(line, ',');
    if (f.size() != 5) throw Error(Errc::MalformedRow, "manifest line " + std::to_string(line_no));
    ManifestEntry e{std::string(text::trim(f[0])), std::string(text::trim(f[1])), std::string(text::trim(f[2])),
                    std::string(text::trim(f[3])), std::string(text::trim(f[4]))};
    if (e.split != "train" && e.split != "validation" && e.split != "test") {
      throw Error(Errc::MalformedRow, "manifest line " + std::to_string(line_no) + ": unknown split " + e.split);
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace raceline
