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

#include <span>
#include <vector>

#include <Eigen/Core>

#include "raceline/geometry.hpp"
#include "raceline/types.hpp"

namespace raceline {

/// Minimum-curvature oracle settings. `tol` is relative: iteration stops once
/// an accepted step lowers the objective by no more than tol * objective.
struct OracleConfig {
  int max_iters = 20000;
  double tol = 1e-12;
  double step_size = 0.05;  // largest change of any w in one iteration
  double margin = 1e-3;     // iterates stay in [margin, 1 - margin]

  void validate() const;
};

/// Sum of squared circumcircle curvatures of consecutive waypoint triples
/// (wrapping on cyclic sets). Collinear triples contribute zero.
double curvature_objective(const NormalSet& ns, std::span<const double> w);

/// Same objective; writes d(objective)/dw into `grad`.
double curvature_objective(const NormalSet& ns, std::span<const double> w, Eigen::VectorXd& grad);

struct OracleTrace {
  std::vector<double> w;
  std::vector<double> objective;  // one entry per accepted iterate, starting at w = 0.5
  int iterations = 0;
};

/// Projected descent from w = 0.5. Each step solves a damped Newton system
/// with a banded finite-difference Hessian on the free variables, is capped at
/// step_size, projected onto [margin, 1 - margin], and accepted only if the
/// objective does not increase; otherwise the damping grows and the step
/// shrinks toward the scaled gradient direction.
OracleTrace mcp_solve_traced(const NormalSet& ns, const OracleConfig& cfg);
std::vector<double> mcp_solve(const NormalSet& ns, const OracleConfig& cfg);

struct OracleTargets {
  NormalSet normals;
  std::vector<double> w;
};

/// resample -> normals -> pseudo-normal repair -> mcp_solve. Vehicle width is
/// not applied here.
OracleTargets generate_targets(const Track& track, const OracleConfig& cfg, const GeometryConfig& geometry = {});

}  // namespace raceline
