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

// Correlation-aware trajectory fingerprinting.
//
// The direction-sensitive scheme (DSFS) samples each fingerprinted point
// among cells the public model considers likely after the previously
// released point, biased toward the original trajectory so copies never
// drift away from it. The probabilistic scheme (PFS) is the baseline it
// improves upon; it samples regardless of direction and can detach from the
// original permanently.

#ifndef TRAJFP_FINGERPRINT_H_
#define TRAJFP_FINGERPRINT_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "trajfp/error.h"
#include "trajfp/geo.h"
#include "trajfp/markov.h"
#include "trajfp/postprocess.h"
#include "trajfp/rng.h"

namespace trajfp {

struct FingerprintConfig {
  double p = 0.4;       // fingerprinting ratio
  double tau = 0.005;   // correlation threshold
  double theta = 0.5;   // balancing factor

  void validate() const {
    require(p > 0.0 && p < 1.0, ErrorCode::kInvalidArgument, "p must be in (0, 1)");
    require(tau >= 0.0 && tau <= 1.0, ErrorCode::kInvalidArgument,
            "tau must be in [0, 1]");
    require(theta >= 0.0 && theta <= 1.0, ErrorCode::kInvalidArgument,
            "theta must be in [0, 1]");
  }
};

enum class DsfsCase {
  kFirst,            // position 1, emission-based
  kCloser,           // original in the tau-closer set, which has > 1 member
  kProbable,         // original in the tau-probable set, closer set is {original}
  kPassThrough,      // original outside a tau-probable set with <= 1 member
  kClosest,          // original outside; nearest probable cell stands in
  kClosestIsAnchor,  // nearest probable cell is the previous output
};

struct DsfsStep {
  DsfsCase kind;
  Cell temp_original;
  Cell output;
  std::vector<Cell> sampling_set;  // empty when nothing was sampled
  double p_current;
};

namespace detail {

// Keeps `keep` with probability 1 - p, otherwise samples from `set` minus
// `keep` proportionally to the transition probability from `anchor`.
inline Cell keep_or_sample(const MarkovModel& m, Cell anchor, Cell keep,
                           std::span<const Cell> set, double p, Rng& rng) {
  const bool perturb = bernoulli(rng, p);
  if (!perturb) return keep;
  std::vector<Cell> alternatives;
  std::vector<double> weights;
  alternatives.reserve(set.size());
  weights.reserve(set.size());
  for (Cell g : set) {
    if (g == keep) continue;
    const double w = m.transition(anchor, g);
    if (w <= 0.0) continue;
    alternatives.push_back(g);
    weights.push_back(w);
  }
  if (alternatives.empty()) return keep;
  return alternatives[sample_weighted(weights, rng)];
}

// Position 1: keep with probability 1 - p, else a neighbor drawn by the
// emission distribution.
inline Cell fingerprint_first(const MarkovModel& m, Cell original, double p, Rng& rng) {
  const bool perturb = bernoulli(rng, p);
  if (!perturb) return original;
  std::vector<Cell> alternatives;
  std::vector<double> weights;
  for (const auto& [g, w] : emission_distribution(m, original)) {
    if (g == original || w <= 0.0) continue;
    alternatives.push_back(g);
    weights.push_back(w);
  }
  if (alternatives.empty()) return original;
  return alternatives[sample_weighted(weights, rng)];
}

inline std::vector<Cell> dsfs_cells(std::span<const Cell> original,
                                    const MarkovModel& m, const FingerprintConfig& cfg,
                                    Rng& rng, std::vector<DsfsStep>* trace) {
  cfg.validate();
  require(!original.empty(), ErrorCode::kInvalidArgument, "empty trajectory");
  const auto check_every = static_cast<std::size_t>(std::ceil(1.0 / cfg.p));
  double p_current = cfg.p;
  std::size_t fingerprinted = 0;

  std::vector<Cell> out;
  out.reserve(original.size());
  out.push_back(fingerprint_first(m, original[0], p_current, rng));
  if (out[0] != original[0]) ++fingerprinted;
  if (trace) trace->push_back({DsfsCase::kFirst, original[0], out[0], {}, p_current});

  for (std::size_t j = 1; j < original.size(); ++j) {
    const Cell prev = out.back();
    const Cell x = original[j];
    const TauSet probable = tau_probable_set(m, prev, cfg.tau);
    const TauSet closer = tau_closer_set(m, prev, x, cfg.tau);

    DsfsCase kind;
    Cell temp = x;
    std::span<const Cell> set;
    if (closer.contains(x) && closer.size() > 1) {
      kind = DsfsCase::kCloser;
      set = closer.members;
    } else if (probable.contains(x)) {
      kind = DsfsCase::kProbable;
      set = probable.members;
    } else if (probable.size() <= 1) {
      kind = DsfsCase::kPassThrough;
    } else {
      temp = *closest_member(m, probable, x);
      if (temp == prev) {
        kind = DsfsCase::kClosestIsAnchor;
        temp = x;
      } else {
        kind = DsfsCase::kClosest;
        set = probable.members;
      }
    }

    const Cell chosen =
        set.empty() ? temp : keep_or_sample(m, prev, temp, set, p_current, rng);
    out.push_back(chosen);
    if (chosen != temp) ++fingerprinted;
    if (trace) {
      trace->push_back({kind, temp, chosen, {set.begin(), set.end()}, p_current});
    }

    // Balancing toward p, checked every ceil(1/p) positions (1-based).
    const std::size_t position = j + 1;
    if (position % check_every == 0) {
      const double expected = cfg.p * static_cast<double>(position);
      const auto count = static_cast<double>(fingerprinted);
      if (count > expected) {
        p_current = cfg.p * (1.0 - cfg.theta);
      } else if (count < expected) {
        p_current = std::min(1.0, cfg.p * (1.0 + cfg.theta));
      } else {
        p_current = cfg.p;
      }
    }
  }
  return out;
}

inline std::vector<Cell> pfs_cells(std::span<const Cell> original, const MarkovModel& m,
                                   double p, double sigma, Rng& rng) {
  require(p > 0.0 && p < 1.0, ErrorCode::kInvalidArgument, "p must be in (0, 1)");
  require(!original.empty(), ErrorCode::kInvalidArgument, "empty trajectory");
  std::vector<Cell> out;
  out.reserve(original.size());
  out.push_back(fingerprint_first(m, original[0], p, rng));
  for (std::size_t j = 1; j < original.size(); ++j) {
    const Cell prev = out.back();
    const Cell x = original[j];
    const TauSet survivors = tau_probable_set(m, prev, sigma);
    if (survivors.contains(x)) {
      out.push_back(keep_or_sample(m, prev, x, survivors.members, p, rng));
    } else if (survivors.empty()) {
      out.push_back(x);
    } else {
      std::vector<double> weights;
      weights.reserve(survivors.size());
      for (Cell g : survivors.members) weights.push_back(m.transition(prev, g));
      out.push_back(survivors.members[sample_weighted(weights, rng)]);
    }
  }
  return out;
}

}  // namespace detail

template <Role R>
concept Shareable = (R == Role::kPostProcessed);

// Direction-sensitive fingerprinting of a trajectory that is ready to share.
template <Role R>
  requires Shareable<R>
FingerprintedTrajectory dsfs_fingerprint(const TypedTrajectory<R>& x_star,
                                         const MarkovModel& m,
                                         const FingerprintConfig& cfg, Rng& rng,
                                         std::vector<DsfsStep>* trace = nullptr) {
  return FingerprintedTrajectory(x_star.id(),
                                 detail::dsfs_cells(x_star.cells(), m, cfg, rng, trace));
}

// Baseline probabilistic fingerprinting; kept for comparison only.
template <Role R>
  requires Shareable<R>
FingerprintedTrajectory pfs_fingerprint(const TypedTrajectory<R>& x_star,
                                        const MarkovModel& m, double p, double sigma,
                                        Rng& rng) {
  return FingerprintedTrajectory(x_star.id(),
                                 detail::pfs_cells(x_star.cells(), m, p, sigma, rng));
}

}  // namespace trajfp

#endif  // TRAJFP_FINGERPRINT_H_
