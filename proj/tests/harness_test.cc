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

#include "trajfp/harness.h"

#include <cmath>
#include <map>
#include <vector>

#include "gtest/gtest.h"

namespace trajfp {
namespace {

ExperimentConfig Small() {
  ExperimentConfig c;
  c.grid_n = 20;
  c.trajectory_count = 10;
  c.trajectory_length = 20;
  c.analyzers = 10;
  c.trials = 20;
  c.model_corpus = 100;
  c.threads = 1;
  return c;
}

TEST(RunRobustness, DeterministicAcrossThreadCounts) {
  ExperimentConfig c = Small();
  c.attack = AttackKind::kRandomFlip;
  c.sweep_variable = "p_r";
  c.sweep_values = {0.2, 0.9};
  const auto a = run_robustness(c);
  c.threads = 3;
  const auto b = run_robustness(c);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].successes, b[i].successes);
    EXPECT_EQ(a[i].ties, b[i].ties);
    EXPECT_DOUBLE_EQ(a[i].sweep_value, c.sweep_values[i]);
  }
}

TEST(RunRobustness, NoAttackAndSingleAnalyzerAreAlwaysTraced) {
  ExperimentConfig c = Small();
  EXPECT_DOUBLE_EQ(run_robustness(c)[0].detection_accuracy, 1.0);
  c.analyzers = 1;
  c.attack = AttackKind::kRandomFlip;
  c.p_r = 1.0;
  EXPECT_DOUBLE_EQ(run_robustness(c)[0].detection_accuracy, 1.0);
}

TEST(RunTrial, AttackersAreUniform) {
  ExperimentConfig c = Small();
  c.trajectory_length = 5;
  c.analyzers = 8;
  const Environment env = make_environment(c);
  const int trials = 10000;
  std::vector<double> hits(8, 0.0);
  for (int i = 0; i < trials; ++i) hits[run_trial(env, c, i).attackers.at(0)] += 1.0;
  double chi2 = 0.0;
  const double expected = trials / 8.0;
  for (double h : hits) chi2 += (h - expected) * (h - expected) / expected;
  EXPECT_LT(chi2, 18.48);  // 7 dof, p = 0.01
}

TEST(RunTrial, CollusionPicksDistinctAttackers) {
  ExperimentConfig c = Small();
  c.attack = AttackKind::kMajorityCollusion;
  c.c = 3;
  const Environment env = make_environment(c);
  for (int i = 0; i < 10; ++i) {
    auto a = run_trial(env, c, i).attackers;
    ASSERT_EQ(a.size(), 3u);
    std::sort(a.begin(), a.end());
    EXPECT_EQ(std::unique(a.begin(), a.end()), a.end());
  }
}

TEST(SynthGenerate, EmpiricalTransitionsConverge) {
  const Grid g(2);
  // Row 0: 0.7 stay, 0.3 -> 1. Others uniform over the grid.
  std::vector<std::vector<Transition>> rows(4);
  rows[0] = {{0, 0.7}, {1, 0.3}};
  for (std::uint32_t i = 1; i < 4; ++i) rows[i] = {{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}};
  const MarkovModel m(g, rows, {1, 1, 1, 1});
  Rng rng(1);
  const Dataset d = synth_generate(m, 200, 200, rng);
  double from0 = 0, stay = 0;
  for (const auto& t : d.trajectories) {
    for (std::size_t j = 1; j < t.cells.size(); ++j) {
      if (g.index(t.cells[j - 1]) != 0) continue;
      from0 += 1;
      stay += g.index(t.cells[j]) == 0;
    }
  }
  EXPECT_NEAR(stay / from0, 0.7, 4 * std::sqrt(0.21 / from0));
}

TEST(SynthGenerate, DeterministicChain) {
  const Grid g(2);
  std::vector<std::vector<Transition>> rows(4);
  for (std::uint32_t i = 0; i < 4; ++i) rows[i] = {{(i + 1) % 4, 1.0}};
  const MarkovModel m(g, rows, {1, 0, 0, 0});
  Rng rng(2);
  const Dataset d = synth_generate(m, 3, 6, rng);
  for (const auto& t : d.trajectories) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(g.index(t.cells[j]), j % 4);
  }
}

TEST(MajorityVoteAccuracy, ClosedForms) {
  EXPECT_DOUBLE_EQ(majority_vote_accuracy(0.8, 1), 0.8);
  const double q = 0.7;
  EXPECT_NEAR(majority_vote_accuracy(q, 3), q * q * q + 3 * q * q * (1 - q), 1e-12);
  EXPECT_NEAR(majority_vote_accuracy(1.0, 9), 1.0, 1e-12);
  EXPECT_GT(majority_vote_accuracy(0.6, 21), majority_vote_accuracy(0.6, 5));
}

TEST(SetParameter, KnownAndUnknown) {
  ExperimentConfig c;
  set_parameter(c, "c", 4.6);
  EXPECT_EQ(c.c, 5);
  set_parameter(c, "p", 0.3);
  EXPECT_DOUBLE_EQ(c.p, 0.3);
  EXPECT_THROW(set_parameter(c, "nope", 1.0), Error);
}

TEST(Validate, RejectsBadConfigs) {
  ExperimentConfig c;
  c.leaked_trajectories = 0;
  EXPECT_THROW(c.validate(), Error);
  c = ExperimentConfig{};
  c.data_source = "gps";
  EXPECT_THROW(c.validate(), Error);
  c = ExperimentConfig{};
  c.p_r = 1.5;
  EXPECT_THROW(c.validate(), Error);
}

TEST(TimingBenchmark, ReportsEveryLength) {
  const auto rows = timing_benchmark(3, {10, 50}, 1, 1, 15);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].length, 50u);
  EXPECT_GE(rows[0].seconds, 0.0);
}

}  // namespace
}  // namespace trajfp
