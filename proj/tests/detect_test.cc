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

#include "trajfp/detect.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "trajfp/harness.h"

namespace trajfp {
namespace {

FingerprintedTrajectory Fp(std::vector<Cell> cells) {
  return FingerprintedTrajectory("x", std::move(cells));
}

LeakedTrajectory Leak(std::vector<Cell> cells) { return LeakedTrajectory("x", std::move(cells)); }

// Counts, per analyzer, positions where no other copy is strictly closer.
std::vector<int> NearestCounts(const std::vector<FingerprintedTrajectory>& copies,
                               const LeakedTrajectory& leak) {
  std::vector<int> out(copies.size(), 0);
  for (std::size_t j = 0; j < leak.size(); ++j) {
    for (std::size_t a = 0; a < copies.size(); ++a) {
      bool beaten = false;
      for (std::size_t b = 0; b < copies.size(); ++b) {
        const Cell ca = copies[a][j], cb = copies[b][j], l = leak[j];
        const int da = (ca.ix - l.ix) * (ca.ix - l.ix) + (ca.iy - l.iy) * (ca.iy - l.iy);
        const int db = (cb.ix - l.ix) * (cb.ix - l.ix) + (cb.iy - l.iy) * (cb.iy - l.iy);
        beaten = beaten || db < da;
      }
      out[a] += beaten ? 0 : 1;
    }
  }
  return out;
}

TEST(DetectTrajectory, ExactCopyScoresOne) {
  const std::vector<FingerprintedTrajectory> copies{Fp({{0, 0}, {5, 5}}), Fp({{1, 0}, {5, 6}})};
  const auto r = detect_trajectory(Leak({{1, 0}, {5, 6}}), copies);
  EXPECT_DOUBLE_EQ(r.scores[1], 1.0);
  EXPECT_DOUBLE_EQ(r.scores[0], 0.0);
  EXPECT_EQ(r.accused, 1);
  EXPECT_FALSE(r.tie);
}

TEST(DetectTrajectory, TwoAnalyzerTieGoesToLowestId) {
  const std::vector<FingerprintedTrajectory> copies{Fp({{0, 0}, {9, 9}}), Fp({{9, 9}, {0, 0}})};
  const auto r = detect_trajectory(Leak({{0, 0}, {0, 0}}), copies);
  EXPECT_DOUBLE_EQ(r.scores[0], 0.5);
  EXPECT_DOUBLE_EQ(r.scores[1], 0.5);
  EXPECT_EQ(r.accused, 0);
  EXPECT_TRUE(r.tie);
}

TEST(DetectTrajectory, MatchesBruteForceAndIsPermutationEquivariant) {
  Rng rng(1);
  const Grid g(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 12);
    auto random_cells = [&] {
      std::vector<Cell> c;
      for (std::size_t j = 0; j < n; ++j) c.push_back(g.cell(uniform_index(rng, g.cell_count())));
      return c;
    };
    std::vector<FingerprintedTrajectory> copies{Fp(random_cells()), Fp(random_cells()),
                                                Fp(random_cells())};
    const auto leak = Leak(random_cells());
    const auto r = detect_trajectory(leak, copies);
    const auto counts = NearestCounts(copies, leak);
    for (std::size_t a = 0; a < 3; ++a) {
      EXPECT_NEAR(r.scores[a], static_cast<double>(counts[a]) / n, 1e-12);
    }
    std::vector<std::size_t> perm{2, 0, 1};
    std::vector<FingerprintedTrajectory> shuffled;
    for (std::size_t a : perm) shuffled.push_back(copies[a]);
    const auto s = detect_trajectory(leak, shuffled);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(s.scores[k], r.scores[perm[k]]);
  }
}

TEST(DetectTrajectory, SingleAnalyzerAndLengthChecks) {
  const std::vector<FingerprintedTrajectory> one{Fp({{3, 3}})};
  EXPECT_EQ(detect_trajectory(Leak({{7, 7}}), one).accused, 0);
  EXPECT_THROW(detect_trajectory(Leak({{7, 7}, {1, 1}}), one), Error);
  EXPECT_THROW(detect_trajectory(Leak({{7, 7}}), std::vector<FingerprintedTrajectory>{}), Error);
}

TEST(Aggregate, PluralityVote) {
  auto rep = [](int a) {
    DetectionReport r;
    r.scores.assign(3, 0.0);
    r.accused = a;
    return r;
  };
  const auto agg = aggregate({rep(2), rep(1), rep(2)}, 3);
  EXPECT_EQ(agg.final_accused, 2);
  EXPECT_EQ(agg.vote_counts, (std::vector<int>{0, 1, 2}));
  EXPECT_FALSE(agg.tie);
  const auto tied = aggregate({rep(2), rep(1)}, 3);
  EXPECT_EQ(tied.final_accused, 1);
  EXPECT_TRUE(tied.tie);
  EXPECT_THROW(aggregate({}, 3), Error);
}

TEST(DetectDataset, TracesALeakedDataset) {
  const Grid g(30);
  const MarkovModel m = open_field_model(g);
  Rng rng(2);
  std::vector<PostProcessedTrajectory> src;
  for (int t = 0; t < 4; ++t) {
    std::vector<Cell> cells{{15, 15}};
    for (int j = 1; j < 40; ++j) {
      const auto s = tau_probable_set(m, cells.back(), 0.005);
      cells.push_back(s.members[uniform_index(rng, s.size())]);
    }
    src.push_back(PostProcessedTrajectory("t" + std::to_string(t), cells));
  }
  const auto dist = distribute(make_dataset(g, src), m, 5, SchemeConfig{}, 77);
  Dataset leaked = dist.records[3].copies;
  for (auto& t : leaked.trajectories) t.role = Role::kLeaked;
  const auto agg = detect_dataset(leaked, dist.records);
  EXPECT_EQ(agg.final_accused, 3);
  EXPECT_EQ(agg.vote_counts[3], 4);

  leaked.trajectories[0].id = "nobody";
  try {
    detect_dataset(leaked, dist.records);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownTrajectory);
  }
}

TEST(DetectDataset, CodeSchemesTraceTheirOwnCopies) {
  const Grid g(30);
  const MarkovModel m = open_field_model(g);
  std::vector<PostProcessedTrajectory> src;
  for (int t = 0; t < 2; ++t) {
    std::vector<Cell> cells;
    for (int j = 0; j < 30; ++j) cells.push_back({j, 10 + t});
    src.push_back(PostProcessedTrajectory("t" + std::to_string(t), cells));
  }
  const Dataset source = make_dataset(g, src);
  for (Scheme s : {Scheme::kBonehShaw, Scheme::kTardos}) {
    SchemeConfig cfg;
    cfg.scheme = s;
    const auto dist = distribute(source, m, 4, cfg, 5);
    Dataset leaked = dist.records[2].copies;
    for (auto& t : leaked.trajectories) t.role = Role::kLeaked;
    EXPECT_EQ(detect_dataset_codes(leaked, source, *dist.code).final_accused, 2);
  }
}

}  // namespace
}  // namespace trajfp
