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

// Attacks a malicious analyzer (or a coalition) may mount on received
// fingerprinted copies before leaking them. Each attack sees only its copies
// and the public model.

#ifndef TRAJFP_ATTACKS_H_
#define TRAJFP_ATTACKS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trajfp/error.h"
#include "trajfp/fingerprint.h"
#include "trajfp/geo.h"
#include "trajfp/markov.h"
#include "trajfp/rng.h"

namespace trajfp {

enum class AttackKind {
  kNone,
  kRandomFlip,
  kCorrelationFlip,
  kMajorityCollusion,
  kProbabilisticCollusion,
  kRefingerprint,
};

inline std::string_view attack_name(AttackKind a) {
  switch (a) {
    case AttackKind::kNone: return "none";
    case AttackKind::kRandomFlip: return "random";
    case AttackKind::kCorrelationFlip: return "correlation";
    case AttackKind::kMajorityCollusion: return "majority";
    case AttackKind::kProbabilisticCollusion: return "probabilistic";
    case AttackKind::kRefingerprint: return "refingerprint";
  }
  return "?";
}

inline AttackKind parse_attack(std::string_view s) {
  for (AttackKind a : {AttackKind::kNone, AttackKind::kRandomFlip,
                       AttackKind::kCorrelationFlip, AttackKind::kMajorityCollusion,
                       AttackKind::kProbabilisticCollusion, AttackKind::kRefingerprint}) {
    if (attack_name(a) == s) return a;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown attack '" + std::string(s) + "'");
}

inline bool is_collusion(AttackKind a) {
  return a == AttackKind::kMajorityCollusion || a == AttackKind::kProbabilisticCollusion;
}

struct AttackConfig {
  double p_r = 0.8;           // random flip
  double p_c = 0.8;           // correlation flip
  double tau_attack = 0.005;  // attacker's correlation threshold
  double p_e = 0.4;           // fingerprint ratio the colluders assume
  int c = 3;                  // colluders
  double p_a = 0.4;           // re-fingerprinting ratio

  void validate() const {
    for (double v : {p_r, p_c, tau_attack, p_e, p_a}) {
      require(v >= 0.0 && v <= 1.0, ErrorCode::kInvalidArgument,
              "attack probabilities must be in [0, 1]");
    }
    require(c >= 1, ErrorCode::kInvalidArgument, "colluder count must be >= 1");
  }
};

inline LeakedTrajectory random_flip(const FingerprintedTrajectory& copy, const Grid& g,
                                    double p_r, Rng& rng) {
  std::vector<Cell> out = copy.cells();
  for (Cell& c : out) {
    if (!bernoulli(rng, p_r)) continue;
    const auto hood = neighbors(c, g, /*include_self=*/false);
    c = hood[uniform_index(rng, hood.size())];
  }
  return LeakedTrajectory(copy.id(), std::move(out));
}

// Flags a point as fingerprinted when its transition from the previous
// output is improbable, and resamples it from the previous output's
// tau-probable set.
inline LeakedTrajectory correlation_flip(const FingerprintedTrajectory& copy,
                                         const MarkovModel& m, double tau_attack,
                                         double p_c, Rng& rng) {
  std::vector<Cell> out = copy.cells();
  for (std::size_t j = 1; j < out.size(); ++j) {
    const Cell prev = out[j - 1];
    if (m.transition(prev, out[j]) >= tau_attack) continue;
    if (!bernoulli(rng, p_c)) continue;
    const TauSet probable = tau_probable_set(m, prev, tau_attack);
    if (probable.empty()) continue;
    std::vector<double> weights;
    weights.reserve(probable.size());
    for (Cell g : probable.members) weights.push_back(m.transition(prev, g));
    out[j] = probable.members[sample_weighted(weights, rng)];
  }
  return LeakedTrajectory(copy.id(), std::move(out));
}

namespace detail {

inline void require_aligned(std::span<const FingerprintedTrajectory> copies) {
  require(copies.size() >= 2, ErrorCode::kInvalidArgument,
          "collusion needs at least two copies");
  for (const auto& c : copies) {
    require(c.size() == copies[0].size(), ErrorCode::kLengthMismatch,
            "colluding copies differ in length");
  }
}

// Distinct cells at position j with their counts, in cell order.
inline std::map<Cell, int> tally(std::span<const FingerprintedTrajectory> copies,
                                 std::size_t j) {
  std::map<Cell, int> counts;
  for (const auto& c : copies) ++counts[c[j]];
  return counts;
}

}  // namespace detail

inline LeakedTrajectory majority_collusion(std::span<const FingerprintedTrajectory> copies,
                                           Rng& rng) {
  detail::require_aligned(copies);
  std::vector<Cell> out;
  out.reserve(copies[0].size());
  for (std::size_t j = 0; j < copies[0].size(); ++j) {
    const auto counts = detail::tally(copies, j);
    int best = 0;
    for (const auto& [cell, n] : counts) best = std::max(best, n);
    std::vector<Cell> modal;
    for (const auto& [cell, n] : counts) {
      if (n == best) modal.push_back(cell);
    }
    out.push_back(modal.size() == 1 ? modal[0] : modal[uniform_index(rng, modal.size())]);
  }
  return LeakedTrajectory(copies[0].id(), std::move(out));
}

// Per-position weights over the observed alphabet (cell order). Exposed for
// tests; `prev` is null at the first position.
inline std::vector<std::pair<Cell, double>> collusion_weights(
    const std::map<Cell, int>& counts, int colluders, const MarkovModel& m,
    const Cell* prev, double p_e, double tau_attack) {
  std::vector<std::pair<Cell, int>> alphabet;
  for (const auto& [cell, n] : counts) {
    if (prev == nullptr || m.transition(*prev, cell) >= tau_attack) {
      alphabet.emplace_back(cell, n);
    }
  }
  if (alphabet.empty()) alphabet.assign(counts.begin(), counts.end());
  if (alphabet.size() == 1) return {{alphabet[0].first, 1.0}};

  const double g = static_cast<double>(counts.size());
  const double log_keep = std::log1p(-p_e);
  const double log_flip = std::log(p_e / (g - 1.0));
  auto log_weights = [&](bool use_transition) {
    std::vector<double> lw;
    for (const auto& [cell, n] : alphabet) {
      double w = n * log_keep + (colluders - n) * log_flip;
      if (use_transition && prev != nullptr) w += std::log(m.transition(*prev, cell));
      lw.push_back(w);
    }
    return lw;
  };
  std::vector<double> lw = log_weights(true);
  double best = -std::numeric_limits<double>::infinity();
  for (double w : lw) best = std::max(best, w);
  if (!std::isfinite(best)) {
    // Every survivor is unreachable under the model: drop the transition term.
    lw = log_weights(false);
    best = -std::numeric_limits<double>::infinity();
    for (double w : lw) best = std::max(best, w);
  }
  std::vector<std::pair<Cell, double>> out;
  double total = 0.0;
  for (std::size_t k = 0; k < alphabet.size(); ++k) {
    const double w = std::isfinite(lw[k]) ? std::exp(lw[k] - best) : 0.0;
    out.emplace_back(alphabet[k].first, w);
    total += w;
  }
  for (auto& [cell, w] : out) w /= total;
  return out;
}

inline LeakedTrajectory probabilistic_collusion(
    std::span<const FingerprintedTrajectory> copies, const MarkovModel& m, double p_e,
    double tau_attack, Rng& rng) {
  detail::require_aligned(copies);
  require(p_e > 0.0 && p_e < 1.0, ErrorCode::kInvalidArgument, "p_e must be in (0, 1)");
  const int colluders = static_cast<int>(copies.size());
  std::vector<Cell> out;
  out.reserve(copies[0].size());
  for (std::size_t j = 0; j < copies[0].size(); ++j) {
    const auto counts = detail::tally(copies, j);
    const Cell* prev = j == 0 ? nullptr : &out.back();
    const auto dist = collusion_weights(counts, colluders, m, prev, p_e, tau_attack);
    if (dist.size() == 1) {
      out.push_back(dist[0].first);
      continue;
    }
    std::vector<double> w;
    w.reserve(dist.size());
    for (const auto& [cell, p] : dist) w.push_back(p);
    out.push_back(dist[sample_weighted(w, rng)].first);
  }
  return LeakedTrajectory(copies[0].id(), std::move(out));
}

// Runs the direction-sensitive scheme over the received copy with the
// attacker's own ratio.
inline LeakedTrajectory refingerprint(const FingerprintedTrajectory& copy,
                                      const MarkovModel& m, double p_a, double tau,
                                      double theta, Rng& rng) {
  if (p_a <= 0.0) return LeakedTrajectory(copy.id(), copy.cells());
  FingerprintConfig cfg{std::min(p_a, 1.0 - 1e-12), tau, theta};
  return LeakedTrajectory(copy.id(), detail::dsfs_cells(copy.cells(), m, cfg, rng, nullptr));
}

// Leaks a copy unchanged.
inline LeakedTrajectory leak(const FingerprintedTrajectory& copy) {
  return LeakedTrajectory(copy.id(), copy.cells());
}

}  // namespace trajfp

#endif  // TRAJFP_ATTACKS_H_
