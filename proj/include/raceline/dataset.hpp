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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "raceline/error.hpp"
#include "raceline/random.hpp"
#include "raceline/types.hpp"

namespace raceline {

struct AugmentSpec {
  std::vector<double> scales{0.8, 0.9, 1.0, 1.1, 1.2};
  bool flip = true;
  bool reverse = true;

  void validate() const;
};

struct AugmentedTrack {
  Track track;
  std::string family;  // source track name
  std::string tag;     // e.g. "s1.1-flip-rev"; "s1" is the identity
};

Track scale_track(const Track& track, double factor);
/// Mirrors y and swaps the half-widths, so left stays left of travel.
Track flip_track(const Track& track);
/// Reverses travel direction and swaps the half-widths. Closed tracks keep
/// point 0 first so station i maps to station (n - i) mod n.
Track reverse_track(const Track& track);

/// scales x {no-flip, flip} x {forward, reverse}, identity first.
std::vector<AugmentedTrack> augment_track(const Track& track, const AugmentSpec& spec);
std::string transform_tag(double scale, bool flip, bool reverse);

struct SplitSpec {
  double train_frac = 0.864;
  double val_frac = 0.088;
  double test_frac = 0.048;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

/// Family-level split: every augmentation of a source shares one subset.
/// Duplicate ids in `families` are collapsed.
Split split_dataset(const std::vector<std::string>& families, const SplitSpec& spec);

template <typename T>
struct Fold {
  std::vector<T> train;
  std::vector<T> validation;
};

template <typename T>
std::vector<Fold<T>> kfold_split(std::vector<T> items, int k, std::uint64_t seed) {
  if (k < 2) throw Error(Errc::BadK, "k must be at least 2");
  if (items.size() < static_cast<std::size_t>(k)) throw Error(Errc::BadK, "fewer items than folds");
  deterministic_shuffle(items, seed);
  const std::size_t n = items.size();
  const std::size_t kk = static_cast<std::size_t>(k);
  std::vector<Fold<T>> folds(kk);
  std::size_t begin = 0;
  for (std::size_t f = 0; f < kk; ++f) {
    const std::size_t size = n / kk + (f < n % kk ? 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (i >= begin && i < begin + size) {
        folds[f].validation.push_back(items[i]);
      } else {
        folds[f].train.push_back(items[i]);
      }
    }
    begin += size;
  }
  return folds;
}

struct ManifestEntry {
  std::string family;
  std::string tag;
  std::string split;  // train | validation | test
  std::string track_path;
  std::string targets_path;
};

/// `family_id,transform_tag,split,track_path,targets_path` rows.
std::string write_manifest(const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> parse_manifest(std::string_view text);

}  // namespace raceline
