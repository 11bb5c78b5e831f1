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

#include "raceline/error.hpp"

namespace raceline {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::DegenerateTrack: return "DegenerateTrack";
    case Errc::NonPositiveWidth: return "NonPositiveWidth";
    case Errc::EmptyLine: return "EmptyLine";
    case Errc::ZeroSpacing: return "ZeroSpacing";
    case Errc::DegenerateTangent: return "DegenerateTangent";
    case Errc::Unresolvable: return "Unresolvable";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::NoIntersection: return "NoIntersection";
    case Errc::MultipleIntersections: return "MultipleIntersections";
    case Errc::BoundariesCross: return "BoundariesCross";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::TooShort: return "TooShort";
    case Errc::TooFewFamilies: return "TooFewFamilies";
    case Errc::BadK: return "BadK";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::CorruptFile: return "CorruptFile";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::IncompatibleModel: return "IncompatibleModel";
    case Errc::WidthTooLarge: return "WidthTooLarge";
    case Errc::Empty: return "Empty";
    case Errc::MissingTargets: return "MissingTargets";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace raceline
