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

#include "trajfp/postprocess.h"

#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "trajfp/harness.h"
#include "trajfp/pim.h"

namespace trajfp {
namespace {

// Each cell may stay or step one cell east.
MarkovModel EastOrStay(const Grid& g) {
  std::vector<std::vector<Transition>> rows(g.cell_count());
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const Cell c = g.cell(i);
    const Cell east{c.ix + 1, c.iy};
    if (g.contains(east)) {
      rows[i] = {{static_cast<std::uint32_t>(i), 0.5},
                 {static_cast<std::uint32_t>(g.index(east)), 0.5}};
    } else {
      rows[i] = {{static_cast<std::uint32_t>(i), 1.0}};
    }
  }
  return MarkovModel(g, rows, std::vector<double>(g.cell_count(), 1.0));
}

TEST(PostProcess, CorrelatedInputUnchanged) {
  const Grid g(5);
  const auto m = EastOrStay(g);
  const NoisyTrajectory x("a", {{0, 2}, {1, 2}, {1, 2}, {2, 2}, {3, 2}});
  EXPECT_EQ(post_process(x, m, 0.3).cells(), x.cells());
}

TEST(PostProcess, MemberBetweenIsChosen) {
  const Grid g(5);
  const auto m = EastOrStay(g);
  const NoisyTrajectory x("a", {{0, 2}, {4, 2}});
  // prob = {(0,2), (1,2)}; (1,2) is nearest to (4,2) and not the anchor.
  EXPECT_EQ(post_process(x, m, 0.3)[1], (Cell{1, 2}));
}

TEST(PostProcess, PitEscapeKeepsNoisyPoint) {
  // The anchor's only probable successor is itself.
  const Grid g(5);
  const auto m = EastOrStay(g);
  const NoisyTrajectory x("a", {{4, 4}, {1, 0}});
  EXPECT_EQ(post_process(x, m, 0.3)[1], (Cell{1, 0}));
}

TEST(PostProcess, EveryPositionIsProbableOrNoisyAndIdempotent) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const Grid g(4);
    const auto dense = oracle::random_dense(g, rng, 0.6);
    const MarkovModel m = oracle::model_of(g, dense);
    std::vector<Cell> cells;
    for (int j = 0; j < 15; ++j) cells.push_back(g.cell(uniform_index(rng, g.cell_count())));
    const NoisyTrajectory x("t", cells);
    const double tau = 0.1;
    const auto y = post_process(x, m, tau);
    ASSERT_EQ(y.size(), x.size());
    EXPECT_EQ(y[0], x[0]);
    bool escaped = false;
    for (std::size_t j = 1; j < y.size(); ++j) {
      const bool probable = dense[g.index(y[j - 1])][g.index(y[j])] >= tau;
      EXPECT_TRUE(probable || y[j] == x[j]);
      if (!probable) escaped = true;
    }
    if (!escaped) {
      EXPECT_EQ(post_process(y, m, tau), y);
    }
  }
}

TEST(PostProcess, RaisesProbablePairFraction) {
  Rng rng(7);
  City city = make_city(20, rng);
  const MarkovModel m = build_model({city.grid, walker_generate(city, 300, 50, rng)});
  const double tau = 0.005;
  std::size_t before = 0, after = 0, pairs = 0;
  for (const auto& t : walker_generate(city, 20, 30, rng)) {
    const auto x = pim_release(RawTrajectory(t.id, t.cells), m, {0.9, 0.01, 512}, rng);
    const auto y = post_process(x, m, tau);
    for (std::size_t j = 1; j < x.size(); ++j, ++pairs) {
      before += m.transition(x[j - 1], x[j]) >= tau;
      after += m.transition(y[j - 1], y[j]) >= tau;
    }
  }
  EXPECT_GT(after, before);
  EXPECT_GT(pairs, 0u);
}

}  // namespace
}  // namespace trajfp
