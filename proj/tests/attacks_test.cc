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

#include "trajfp/attacks.h"

#include <cmath>
#include <map>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "trajfp/harness.h"

namespace trajfp {
namespace {

FingerprintedTrajectory Fp(std::vector<Cell> cells) {
  return FingerprintedTrajectory("x", std::move(cells));
}

std::vector<Cell> RandomCells(const Grid& g, std::size_t n, Rng& rng) {
  std::vector<Cell> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(g.cell(uniform_index(rng, g.cell_count())));
  return out;
}

TEST(RandomFlip, Extremes) {
  const Grid g(8);
  Rng rng(1);
  const auto x = Fp(RandomCells(g, 200, rng));
  EXPECT_EQ(random_flip(x, g, 0.0, rng).cells(), x.cells());
  const auto y = random_flip(x, g, 1.0, rng);
  for (std::size_t j = 0; j < x.size(); ++j) {
    EXPECT_NE(y[j], x[j]);
    EXPECT_LE(cell_distance_sq(y[j], x[j]), 2);
  }
}

TEST(RandomFlip, HalfWithinThreeSigma) {
  const Grid g(30);
  Rng rng(2);
  const std::size_t n = 10000;
  const auto x = Fp(RandomCells(g, n, rng));
  const auto y = random_flip(x, g, 0.5, rng);
  double changed = 0;
  for (std::size_t j = 0; j < n; ++j) changed += y[j] != x[j];
  EXPECT_NEAR(changed / n, 0.5, 3 * std::sqrt(0.25 / n));
}

TEST(CorrelationFlip, IdentityCases) {
  const Grid g(30);
  const MarkovModel m = open_field_model(g);
  const auto x = Fp({{5, 5}, {6, 5}, {7, 6}, {7, 7}});
  Rng rng(3);
  EXPECT_EQ(correlation_flip(x, m, 0.005, 1.0, rng).cells(), x.cells());
  const auto jumpy = Fp({{5, 5}, {20, 20}, {2, 2}});
  EXPECT_EQ(correlation_flip(jumpy, m, 0.005, 0.0, rng).cells(), jumpy.cells());
}

TEST(CorrelationFlip, JumpIsResampledIntoProbableSet) {
  const Grid g(5);
  const MarkovModel m = open_field_model(g);
  Rng rng(4);
  const auto x = Fp({{0, 0}, {4, 4}});
  const double tau = 0.02;
  ASSERT_LT(m.transition({0, 0}, {4, 4}), tau);
  for (int i = 0; i < 50; ++i) {
    const auto y = correlation_flip(x, m, tau, 1.0, rng);
    EXPECT_TRUE(tau_probable_set(m, {0, 0}, tau).contains(y[1]));
  }
}

TEST(MajorityCollusion, Votes) {
  const Cell A{1, 1}, B{2, 2};
  Rng rng(5);
  const std::vector<FingerprintedTrajectory> same{Fp({A, B}), Fp({A, B})};
  EXPECT_EQ(majority_collusion(same, rng).cells(), (std::vector<Cell>{A, B}));
  const std::vector<FingerprintedTrajectory> aab{Fp({A}), Fp({A}), Fp({B})};
  EXPECT_EQ(majority_collusion(aab, rng)[0], A);
  const std::vector<FingerprintedTrajectory> ab{Fp({A}), Fp({B})};
  Rng r1(6), r2(6);
  EXPECT_EQ(majority_collusion(ab, r1)[0], majority_collusion(ab, r2)[0]);
  int a = 0;
  for (int i = 0; i < 400; ++i) a += majority_collusion(ab, rng)[0] == A;
  EXPECT_GT(a, 140);
  EXPECT_LT(a, 260);
}

TEST(Collusion, RejectsBadInput) {
  Rng rng(7);
  const std::vector<FingerprintedTrajectory> one{Fp({{0, 0}})};
  EXPECT_THROW(majority_collusion(one, rng), Error);
  const std::vector<FingerprintedTrajectory> ragged{Fp({{0, 0}}), Fp({{0, 0}, {1, 1}})};
  EXPECT_THROW(majority_collusion(ragged, rng), Error);
}

// Transition row of the anchor: 0.5 -> A, 0.2 -> B, the rest elsewhere.
MarkovModel HandRow(const Grid& g, Cell anchor, Cell a, Cell b) {
  std::vector<std::vector<Transition>> rows(g.cell_count());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = {{static_cast<std::uint32_t>(i), 1.0}};
  rows[g.index(anchor)] = {{static_cast<std::uint32_t>(g.index(a)), 0.5},
                           {static_cast<std::uint32_t>(g.index(b)), 0.2},
                           {static_cast<std::uint32_t>(g.index(anchor)), 0.3}};
  return MarkovModel(g, rows, std::vector<double>(g.cell_count(), 1.0));
}

TEST(ProbabilisticCollusion, HandWeights) {
  const Grid g(4);
  const Cell prev{0, 0}, A{1, 0}, B{0, 1};
  const MarkovModel m = HandRow(g, prev, A, B);
  const std::map<Cell, int> counts{{A, 2}, {B, 1}};
  const double pe = 0.4;
  const auto w = collusion_weights(counts, 3, m, &prev, pe, 0.005);
  // Three-term product: agreement, disagreement spread over |G| - 1 values,
  // and the transition from the previous output.
  const double wa = std::pow(1 - pe, 2) * std::pow(pe / 1, 1) * 0.5;
  const double wb = std::pow(1 - pe, 1) * std::pow(pe / 1, 2) * 0.2;
  ASSERT_EQ(w.size(), 2u);
  std::map<Cell, double> by_cell(w.begin(), w.end());
  EXPECT_NEAR(by_cell.at(A), wa / (wa + wb), 1e-12);
  EXPECT_NEAR(by_cell.at(B), wb / (wa + wb), 1e-12);
}

TEST(ProbabilisticCollusion, UnanimousValueIsChosen) {
  const Grid g(30);
  const MarkovModel m = open_field_model(g);
  Rng rng(8);
  const auto x = Fp({{3, 3}, {4, 3}, {5, 4}});
  const std::vector<FingerprintedTrajectory> copies{x, x, x};
  EXPECT_EQ(probabilistic_collusion(copies, m, 0.4, 0.005, rng).cells(), x.cells());
}

TEST(ProbabilisticCollusion, WeightsAreADistribution) {
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const Grid g(4);
    const auto dense = oracle::random_dense(g, rng, 0.7);
    const MarkovModel m = oracle::model_of(g, dense);
    std::map<Cell, int> counts;
    const int c = 2 + static_cast<int>(uniform_index(rng, 5));
    for (int k = 0; k < c; ++k) ++counts[g.cell(uniform_index(rng, g.cell_count()))];
    const Cell prev = g.cell(uniform_index(rng, g.cell_count()));
    const auto w = collusion_weights(counts, c, m, trial % 5 == 0 ? nullptr : &prev,
                                     uniform(rng, 0.05, 0.95), 0.1);
    double sum = 0.0;
    for (const auto& [cell, p] : w) {
      EXPECT_GE(p, 0.0);
      EXPECT_TRUE(counts.count(cell));
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Attacks, PreserveLength) {
  const Grid g(30);
  const MarkovModel m = open_field_model(g);
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 40);
    std::vector<FingerprintedTrajectory> copies;
    for (int k = 0; k < 4; ++k) copies.push_back(Fp(RandomCells(g, n, rng)));
    EXPECT_EQ(random_flip(copies[0], g, 0.5, rng).size(), n);
    EXPECT_EQ(correlation_flip(copies[0], m, 0.005, 0.5, rng).size(), n);
    EXPECT_EQ(majority_collusion(copies, rng).size(), n);
    EXPECT_EQ(probabilistic_collusion(copies, m, 0.4, 0.005, rng).size(), n);
    EXPECT_EQ(refingerprint(copies[0], m, 0.4, 0.005, 0.5, rng).size(), n);
    EXPECT_EQ(leak(copies[0]).cells(), copies[0].cells());
  }
}

TEST(Refingerprint, ZeroRatioIsIdentity) {
  const Grid g(30);
  const MarkovModel m = open_field_model(g);
  Rng rng(11);
  const auto x = Fp({{3, 3}, {4, 3}, {5, 4}, {6, 4}});
  EXPECT_EQ(refingerprint(x, m, 0.0, 0.005, 0.5, rng).cells(), x.cells());
  EXPECT_EQ(refingerprint(x, m, 1e-12, 0.005, 0.5, rng).cells(), x.cells());
}

TEST(AttackNames, RoundTrip) {
  for (AttackKind a : {AttackKind::kNone, AttackKind::kRandomFlip, AttackKind::kCorrelationFlip,
                       AttackKind::kMajorityCollusion, AttackKind::kProbabilisticCollusion,
                       AttackKind::kRefingerprint}) {
    EXPECT_EQ(parse_attack(attack_name(a)), a);
  }
  EXPECT_THROW(parse_attack("bogus"), Error);
}

}  // namespace
}  // namespace trajfp
