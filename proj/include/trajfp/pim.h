// Copyright 2026 The trajfp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Planar isotropic mechanism: per-timestamp epsilon-DP release of a
// trajectory against an adversary who tracks a Markov belief.
//
// At each timestamp the mechanism
//   1. propagates the belief through the transition matrix (prior),
//   2. keeps the smallest set of cells holding 1 - delta of the prior,
//   3. builds the convex hull of those cells and its sensitivity hull,
//   4. whitens the sensitivity hull into (approximate) isotropic position,
//   5. draws k-norm noise in the whitened space around the true location,
//   6. maps the sample back, snaps it to a cell, and updates the belief.
//
// Epsilon is an event-level (per-timestamp) budget. No composition across
// timestamps is accounted for.

#ifndef TRAJFP_PIM_H_
#define TRAJFP_PIM_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "trajfp/error.h"
#include "trajfp/geo.h"
#include "trajfp/hull.h"
#include "trajfp/markov.h"
#include "trajfp/rng.h"

namespace trajfp {

struct PimParams {
  double epsilon = 1.0;
  double delta = 0.01;
  int isotropic_samples = 4096;

  void validate() const {
    require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::kInvalidArgument,
            "epsilon must be > 0");
    require(delta > 0.0 && delta < 1.0, ErrorCode::kInvalidArgument,
            "delta must be in (0, 1)");
    require(isotropic_samples >= 16, ErrorCode::kInvalidArgument,
            "isotropic_samples must be >= 16");
  }
};

struct BeliefState {
  std::vector<double> prior;
  std::vector<double> posterior;
};

// prior = posterior * M, renormalized.
inline std::vector<double> prior_update(std::span<const double> posterior,
                                        const MarkovModel& m) {
  require(posterior.size() == m.grid().cell_count(), ErrorCode::kInvalidArgument,
          "belief size does not match grid");
  std::vector<double> prior(posterior.size(), 0.0);
  for (std::size_t i = 0; i < posterior.size(); ++i) {
    const double mass = posterior[i];
    if (mass == 0.0) continue;
    for (const Transition& t : m.row(i)) prior[t.to] += mass * t.prob;
  }
  const double total = std::accumulate(prior.begin(), prior.end(), 0.0);
  require(total > 0.0, ErrorCode::kInvalidArgument, "posterior has no mass");
  for (double& p : prior) p /= total;
  return prior;
}

// Greedy minimum set with prior mass >= 1 - delta: descending probability,
// ties by ascending cell.
inline std::vector<Cell> delta_location_set(std::span<const double> prior,
                                            double delta, const Grid& g) {
  require(prior.size() == g.cell_count(), ErrorCode::kInvalidArgument,
          "prior size does not match grid");
  std::vector<std::size_t> order(prior.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return prior[a] > prior[b] || (prior[a] == prior[b] && a < b);
  });
  // Relative slack absorbs rounding in the running sum.
  const double target = (1.0 - delta) * (1.0 - 1e-12);
  std::vector<Cell> out;
  double mass = 0.0;
  for (std::size_t idx : order) {
    if (mass >= target || prior[idx] <= 0.0) break;
    out.push_back(g.cell(idx));
    mass += prior[idx];
  }
  return out;
}

struct IsotropicPosition {
  Mat2 transform;  // original -> isotropic
  Mat2 inverse;    // isotropic -> original
  ConvexHull body;  // the hull in isotropic position
};

// Approximate isotropic position by whitening with a Monte Carlo estimate of
// the covariance of the uniform distribution on the hull. `sample_count`
// points are drawn from the bounding box; those inside feed the estimate.
inline IsotropicPosition isotropic_transform(const ConvexHull& k,
                                             int sample_count, Rng& rng) {
  require(k.size() >= 3 && k.area() > kMinHullArea, ErrorCode::kDegenerateHull,
          "hull has no area");
  Vec2 lo, hi;
  k.bounding_box(lo, hi);
  double n = 0.0, mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    const Vec2 p{uniform(rng, lo.x, hi.x), uniform(rng, lo.y, hi.y)};
    if (!k.contains(p, 0.0)) continue;
    // Welford update of the mean and co-moments.
    n += 1.0;
    const double dx = p.x - mx;
    const double dy = p.y - my;
    mx += dx / n;
    my += dy / n;
    sxx += dx * (p.x - mx);
    syy += dy * (p.y - my);
    sxy += dx * (p.y - my);
  }
  require(n >= 8.0, ErrorCode::kDegenerateHull, "too few samples landed in the hull");
  sxx /= n;
  syy /= n;
  sxy /= n;
  const double det = sxx * syy - sxy * sxy;
  require(det > 0.0 && std::isfinite(det), ErrorCode::kDegenerateHull,
          "covariance estimate is singular");
  // sqrt of a 2x2 SPD matrix S: (S + sqrt(det) I) / sqrt(tr + 2 sqrt(det)).
  const double s = std::sqrt(det);
  const double t = std::sqrt(sxx + syy + 2.0 * s);
  const Mat2 root{(sxx + s) / t, sxy / t, sxy / t, (syy + s) / t};
  IsotropicPosition iso;
  iso.inverse = root;
  iso.transform = root.inverse();
  iso.body = k.transformed(iso.transform);
  return iso;
}

// Density proportional to exp(-epsilon * ||z - center||_K): a direction
// uniform in the body scaled by a Gamma(d + 1 = 3, 1/epsilon) radius.
inline Vec2 knorm_sample(const ConvexHull& body, Vec2 center, double epsilon,
                         Rng& rng) {
  require(epsilon > 0.0, ErrorCode::kInvalidArgument, "epsilon must be > 0");
  const double radius = gamma_integer_shape(rng, 3, 1.0 / epsilon);
  const Vec2 u = sample_uniform_in(body, rng);
  return center + radius * u;
}

// Bayes update with the k-norm likelihood of the released point `z`
// (original space) for every candidate cell, in log space.
inline std::vector<double> posterior_update(std::span<const double> prior,
                                            Vec2 z, const IsotropicPosition& iso,
                                            double epsilon, const Grid& g) {
  require(prior.size() == g.cell_count(), ErrorCode::kInvalidArgument,
          "prior size does not match grid");
  const Vec2 z_iso = iso.transform * z;
  std::vector<double> log_w(prior.size(), -std::numeric_limits<double>::infinity());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (prior[i] <= 0.0) continue;
    const Vec2 s_iso = iso.transform * cell_point(g.cell(i));
    log_w[i] = std::log(prior[i]) - epsilon * iso.body.minkowski_norm(z_iso - s_iso);
    best = std::max(best, log_w[i]);
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::kAllZeroLikelihood, "every candidate has zero likelihood");
  }
  std::vector<double> post(prior.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (!std::isfinite(log_w[i])) continue;
    post[i] = std::exp(log_w[i] - best);
    total += post[i];
  }
  for (double& p : post) p /= total;
  return post;
}

// Per-step internals, exposed for tests and diagnostics.
struct PimStep {
  std::vector<Cell> delta_set;
  ConvexHull sensitivity;
  Vec2 z;  // before snapping, original space
  Cell released;
};

// Releases one trajectory. Reads nothing but its arguments.
inline NoisyTrajectory pim_release(const RawTrajectory& traj, const MarkovModel& m,
                                   const PimParams& params, Rng& rng,
                                   std::vector<PimStep>* steps = nullptr) {
  params.validate();
  const Grid& g = m.grid();
  for (Cell c : traj.cells()) {
    require(g.contains(c), ErrorCode::kOutOfBounds, "trajectory cell off the grid");
  }
  BeliefState belief;
  std::vector<Cell> released;
  released.reserve(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const Cell truth = traj[t];
    if (t == 0) {
      // No belief yet: start uniform over the true cell's Moore neighborhood.
      belief.prior.assign(g.cell_count(), 0.0);
      const auto hood = neighbors(truth, g, /*include_self=*/true);
      for (Cell c : hood) belief.prior[g.index(c)] = 1.0 / static_cast<double>(hood.size());
    } else {
      belief.prior = prior_update(belief.posterior, m);
    }
    const std::vector<Cell> delta_set = delta_location_set(belief.prior, params.delta, g);
    std::vector<Vec2> pts;
    pts.reserve(delta_set.size());
    for (Cell c : delta_set) pts.push_back(cell_point(c));
    const ConvexHull sensitivity = sensitivity_hull(convex_hull(pts));
    const IsotropicPosition iso =
        isotropic_transform(sensitivity, params.isotropic_samples, rng);
    const Vec2 z_iso =
        knorm_sample(iso.body, iso.transform * cell_point(truth), params.epsilon, rng);
    const Vec2 z = iso.inverse * z_iso;
    const Cell out = g.snap(z);
    released.push_back(out);
    belief.posterior =
        posterior_update(belief.prior, cell_point(out), iso, params.epsilon, g);
    if (steps != nullptr) steps->push_back({delta_set, sensitivity, z, out});
  }
  return NoisyTrajectory(traj.id(), std::move(released));
}

}  // namespace trajfp

#endif  // TRAJFP_PIM_H_
