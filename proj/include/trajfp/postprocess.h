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

#ifndef TRAJFP_POSTPROCESS_H_
#define TRAJFP_POSTPROCESS_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "trajfp/geo.h"
#include "trajfp/markov.h"

namespace trajfp {

// Member of `set` nearest to `target`; ties prefer the higher transition
// probability from the set's anchor, then the smaller cell.
inline std::optional<Cell> closest_member(const MarkovModel& m, const TauSet& set,
                                          Cell target) {
  std::optional<Cell> best;
  long long best_d = 0;
  double best_p = 0.0;
  for (Cell g : set.members) {
    const long long d = cell_distance_sq(g, target);
    const double p = m.transition(set.anchor, g);
    if (!best || d < best_d || (d == best_d && p > best_p)) {
      best = g;
      best_d = d;
      best_p = p;
    }
  }
  return best;
}

template <Role R>
concept PostProcessable = (R == Role::kNoisy || R == Role::kPostProcessed);

// Restores pairwise correlations in a released trajectory using only the
// public model. A point outside the tau-probable set of the previous output
// is replaced by the nearest member of that set, unless the previous output
// is at least as close to it as that member (pit escape), in which case the
// noisy point is kept.
template <Role R>
  requires PostProcessable<R>
PostProcessedTrajectory post_process(const TypedTrajectory<R>& noisy,
                                     const MarkovModel& m, double tau) {
  std::vector<Cell> out;
  out.reserve(noisy.size());
  out.push_back(noisy[0]);
  for (std::size_t j = 1; j < noisy.size(); ++j) {
    const Cell prev = out.back();
    const Cell observed = noisy[j];
    const TauSet probable = tau_probable_set(m, prev, tau);
    if (probable.contains(observed) || probable.empty()) {
      out.push_back(observed);
      continue;
    }
    const Cell closest = *closest_member(m, probable, observed);
    // With closest == prev the literal test ||prev, x|| <= ||prev, closest|| = 0
    // never fires; measure the member's distance to the observation instead.
    if (cell_distance_sq(prev, observed) <= cell_distance_sq(closest, observed)) {
      out.push_back(observed);
    } else {
      out.push_back(closest);
    }
  }
  return PostProcessedTrajectory(noisy.id(), std::move(out));
}

}  // namespace trajfp

#endif  // TRAJFP_POSTPROCESS_H_
