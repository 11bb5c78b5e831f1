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

#include "raceline/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>

#include "raceline/error.hpp"

namespace raceline {
namespace {

// 4 * cross(b - a, c - b)^2 / (|b - a|^2 |c - b|^2 |c - a|^2), the squared
// curvature of the circle through a, b, c. Gradients are accumulated into
// ga, gb, gc when requested.
double triple_term(const Vec2& a, const Vec2& b, const Vec2& c, Vec2* ga, Vec2* gb, Vec2* gc) {
  const Vec2 u = b - a;
  const Vec2 v = c - b;
  const Vec2 e = c - a;
  const double cr = u.x() * v.y() - u.y() * v.x();
  const double uu = u.squaredNorm();
  const double vv = v.squaredNorm();
  const double ee = e.squaredNorm();
  const double den = uu * vv * ee;
  if (!(den > 0.0)) return 0.0;
  const double f = 4.0 * cr * cr / den;
  if (ga != nullptr) {
    const double k = 8.0 * cr / den;
    const double fu = f / uu;
    const double fv = f / vv;
    const double fe = f / ee;
    const Vec2 dca(b.y() - c.y(), c.x() - b.x());
    const Vec2 dcb(c.y() - a.y(), a.x() - c.x());
    const Vec2 dcc(a.y() - b.y(), b.x() - a.x());
    *ga += k * dca + 2.0 * fu * u + 2.0 * fe * e;
    *gb += k * dcb - 2.0 * fu * u + 2.0 * fv * v;
    *gc += k * dcc - 2.0 * fv * v - 2.0 * fe * e;
  }
  return f;
}

double objective_impl(const NormalSet& ns, std::span<const double> w, Eigen::VectorXd* grad) {
  const std::size_t n = ns.size();
  if (w.size() != n) throw Error(Errc::LengthMismatch, "one waypoint per normal required");
  Polyline p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = ns[i].left_end + w[i] * (ns[i].right_end - ns[i].left_end);
  }
  std::vector<Vec2> gp;
  if (grad != nullptr) gp.assign(n, Vec2::Zero());

  double total = 0.0;
  if (n >= 3) {
    const std::size_t first = ns.cyclic ? 0 : 1;
    const std::size_t last = ns.cyclic ? n : n - 1;
    for (std::size_t i = first; i < last; ++i) {
      const std::size_t a = (i + n - 1) % n;
      const std::size_t c = (i + 1) % n;
      if (grad != nullptr) {
        total += triple_term(p[a], p[i], p[c], &gp[a], &gp[i], &gp[c]);
      } else {
        total += triple_term(p[a], p[i], p[c], nullptr, nullptr, nullptr);
      }
    }
  }
  if (grad != nullptr) {
    grad->resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      (*grad)[static_cast<Eigen::Index>(i)] = gp[i].dot(ns[i].right_end - ns[i].left_end);
    }
  }
  return total;
}

}  // namespace

void OracleConfig::validate() const {
  if (max_iters < 1) throw Error(Errc::InvalidConfig, "oracle max_iters must be >= 1");
  if (!(margin >= 0.0 && margin < 0.5)) throw Error(Errc::InvalidConfig, "oracle margin must be in [0, 0.5)");
  if (!(step_size >= 0.0) || !std::isfinite(step_size)) {
    throw Error(Errc::InvalidConfig, "oracle step_size must be finite and non-negative");
  }
  if (!(tol >= 0.0)) throw Error(Errc::InvalidConfig, "oracle tol must be non-negative");
}

double curvature_objective(const NormalSet& ns, std::span<const double> w) {
  return objective_impl(ns, w, nullptr);
}

double curvature_objective(const NormalSet& ns, std::span<const double> w, Eigen::VectorXd& grad) {
  return objective_impl(ns, w, &grad);
}

namespace {

// Column colouring for the banded Hessian: w_j influences gradient entries
// j-2 .. j+2, so columns five apart can be perturbed together. On cyclic sets
// the leftover tail gets its own colours to avoid clashes across the wrap.
std::vector<int> hessian_colours(Eigen::Index n, bool cyclic) {
  std::vector<int> colour(static_cast<std::size_t>(n));
  const Eigen::Index body = cyclic ? (n / 5) * 5 : n;
  for (Eigen::Index i = 0; i < n; ++i) {
    colour[static_cast<std::size_t>(i)] = i < body ? static_cast<int>(i % 5) : static_cast<int>(5 + (i - body));
  }
  return colour;
}

Eigen::SparseMatrix<double> banded_hessian(const NormalSet& ns, const Eigen::VectorXd& w,
                                           const std::vector<int>& colour) {
  const auto n = w.size();
  const int colours = n == 0 ? 0 : *std::max_element(colour.begin(), colour.end()) + 1;
  const double h = 1e-6;
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::VectorXd wp(n), wm(n), gp, gm;
  for (int c = 0; c < colours; ++c) {
    wp = w;
    wm = w;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (colour[static_cast<std::size_t>(j)] == c) {
        wp[j] += h;
        wm[j] -= h;
      }
    }
    curvature_objective(ns, {wp.data(), static_cast<std::size_t>(n)}, gp);
    curvature_objective(ns, {wm.data(), static_cast<std::size_t>(n)}, gm);
    const Eigen::VectorXd col = (gp - gm) / (2.0 * h);
    for (Eigen::Index i = 0; i < n; ++i) {
      // Row i sees exactly one perturbed column of this colour within +-2.
      for (Eigen::Index d = -2; d <= 2; ++d) {
        Eigen::Index j = i + d;
        if (ns.cyclic) {
          j = ((j % n) + n) % n;
        } else if (j < 0 || j >= n) {
          continue;
        }
        if (colour[static_cast<std::size_t>(j)] == c) {
          entries.emplace_back(i, j, 0.5 * col[i]);
          entries.emplace_back(j, i, 0.5 * col[i]);
          break;
        }
      }
    }
  }
  Eigen::SparseMatrix<double> hess(n, n);
  hess.setFromTriplets(entries.begin(), entries.end());
  return hess;
}

}  // namespace

OracleTrace mcp_solve_traced(const NormalSet& ns, const OracleConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(ns.size());
  const double lo = cfg.margin;
  const double hi = 1.0 - cfg.margin;
  auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    return curvature_objective(ns, {x.data(), static_cast<std::size_t>(n)}, g);
  };

  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 0.5);
  Eigen::VectorXd g;
  double f = objective(w, g);
  OracleTrace trace;
  trace.objective.push_back(f);
  if (n < 3 || cfg.step_size == 0.0) {
    trace.w.assign(w.data(), w.data() + n);
    return trace;
  }

  const auto colour = hessian_colours(n, ns.cyclic);
  double mu = 1e-3;  // Levenberg damping relative to the largest Hessian diagonal
  Eigen::VectorXd step(n), trial(n), g_trial;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();

  for (int it = 0; it < cfg.max_iters; ++it) {
    // Variables pinned at a bound with the gradient pushing outward stay put.
    std::vector<bool> fixed(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      fixed[static_cast<std::size_t>(i)] = (w[i] <= lo && g[i] > 0.0) || (w[i] >= hi && g[i] < 0.0);
    }
    Eigen::SparseMatrix<double> hess = banded_hessian(ns, w, colour);
    for (int k = 0; k < hess.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator e(hess, k); e; ++e) {
        if (fixed[static_cast<std::size_t>(e.row())] || fixed[static_cast<std::size_t>(e.col())]) {
          e.valueRef() = e.row() == e.col() ? 1.0 : 0.0;
        }
      }
    }
    Eigen::VectorXd rhs = -g;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (fixed[static_cast<std::size_t>(i)]) rhs[i] = 0.0;
    }
    const double scale = std::max(hess.diagonal().cwiseAbs().maxCoeff(), 1e-300);

    bool accepted = false;
    double f_trial = f;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      ldlt.compute(hess + (mu * scale) * identity);
      if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any()) {
        mu *= 10.0;
        continue;
      }
      step = ldlt.solve(rhs);
      const double biggest = step.cwiseAbs().maxCoeff();
      if (biggest > cfg.step_size) step *= cfg.step_size / biggest;
      trial = (w + step).cwiseMax(lo).cwiseMin(hi);
      if (trial == w) break;
      f_trial = objective(trial, g_trial);
      if (f_trial <= f) {
        accepted = true;
        mu = std::max(mu / 3.0, 1e-12);
      } else {
        mu *= 10.0;
      }
    }
    if (!accepted) break;

    const double decrease = f - f_trial;
    w.swap(trial);
    g.swap(g_trial);
    f = f_trial;
    trace.objective.push_back(f);
    trace.iterations = it + 1;
    if (decrease <= cfg.tol * f) break;
  }
  trace.w.assign(w.data(), w.data() + n);
  return trace;
}

std::vector<double> mcp_solve(const NormalSet& ns, const OracleConfig& cfg) {
  return mcp_solve_traced(ns, cfg).w;
}

OracleTargets generate_targets(const Track& track, const OracleConfig& cfg, const GeometryConfig& geometry) {
  OracleTargets out;
  out.normals = prepare_normals(track, geometry);
  out.w = mcp_solve(out.normals, cfg);
  return out;
}

}  // namespace raceline
