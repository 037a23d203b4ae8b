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

#ifndef TRAJFP_RNG_H_
#define TRAJFP_RNG_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace trajfp {

// Every randomized routine takes one of these by reference. The engine is
// fully specified by the standard, so a seed reproduces bit-identical streams
// on every conforming platform. Distributions are hand-rolled below for the
// same reason (std:: distributions are implementation-defined).
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hierarchical seed derivation: master -> trial -> analyzer -> trajectory.
// Children depend only on (parent, stream, index), so adding siblings never
// perturbs existing ones.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(parent ^ splitmix64(stream)) + index);
}

// Stream tags for derive_seed.
namespace seed_stream {
inline constexpr std::uint64_t kTrial = 0x7472;
inline constexpr std::uint64_t kAnalyzer = 0x616e;
inline constexpr std::uint64_t kTrajectory = 0x7472616a;
inline constexpr std::uint64_t kMarks = 0x6d6b;
inline constexpr std::uint64_t kCodebook = 0x6362;
inline constexpr std::uint64_t kAttack = 0x6174;
inline constexpr std::uint64_t kPrivacy = 0x6470;
inline constexpr std::uint64_t kData = 0x6474;
inline constexpr std::uint64_t kSelection = 0x736c;
inline constexpr std::uint64_t kWorkload = 0x776b;
}  // namespace seed_stream

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Uniform integer in [0, n), unbiased (rejects the modulo remainder).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return static_cast<std::size_t>(draw % bound);
}

// Samples index i with probability weights[i] / sum(weights). Weights must be
// nonnegative with a positive sum.
inline std::size_t sample_weighted(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double target = uniform01(rng) * total;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    if (target < weights[i]) return i;
    target -= weights[i];
  }
  return last_positive;
}

// Gamma(shape k, scale theta) for integer k as a sum of k exponentials.
inline double gamma_integer_shape(Rng& rng, int shape, double scale) {
  double sum = 0.0;
  for (int i = 0; i < shape; ++i) {
    sum += -std::log1p(-uniform01(rng));
  }
  return sum * scale;
}

}  // namespace trajfp

#endif  // TRAJFP_RNG_H_
