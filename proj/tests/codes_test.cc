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

#include "trajfp/codes.h"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace trajfp {
namespace {

Bits FromString(const std::string& s) {
  Bits b;
  for (char ch : s) b.push_back(ch == '1');
  return b;
}

TEST(BonehShaw, GammaFourThree) {
  const auto book = bs_generate(4, 3);
  ASSERT_EQ(book.users(), 4u);
  EXPECT_EQ(book.codewords[0], FromString("111111111"));
  EXPECT_EQ(book.codewords[1], FromString("000111111"));
  EXPECT_EQ(book.codewords[2], FromString("000000111"));
  EXPECT_EQ(book.codewords[3], FromString("000000000"));
}

TEST(BonehShaw, SmallestCode) {
  const auto book = bs_generate(2, 1);
  EXPECT_EQ(book.codewords[0], FromString("1"));
  EXPECT_EQ(book.codewords[1], FromString("0"));
}

TEST(BonehShaw, WorkedExampleAccusesSecondUser) {
  // Users are 0-based here: index 1 is the second user.
  EXPECT_EQ(bs_detect(FromString("001011111"), bs_generate(4, 3)), 1);
}

TEST(BonehShaw, ExtremeWords) {
  const auto book = bs_generate(4, 3);
  EXPECT_EQ(bs_detect(FromString("111111111"), book), 0);
  EXPECT_EQ(bs_detect(FromString("000000000"), book), 3);
  EXPECT_THROW(bs_detect(FromString("0"), book), Error);
}

TEST(BonehShaw, OwnCodewordIsTraced) {
  const auto book = bs_generate(9, 5);
  for (std::size_t u = 0; u < book.users(); ++u) {
    EXPECT_EQ(bs_detect(book.codewords[u], book), static_cast<int>(u));
  }
}

TEST(Tardos, LengthFromParameters) {
  EXPECT_EQ(tardos_k(0.01), 7);
  EXPECT_EQ(tardos_length(3, 0.01), 6300u);
  EXPECT_EQ(tardos_k(0.5), 1);
  EXPECT_EQ(tardos_k(0.25), 2);
}

TEST(Tardos, BiasWithinCutoff) {
  Rng rng(1);
  const auto book = tardos_generate(20, 3, 0.01, rng);
  EXPECT_EQ(book.length(), 6300u);
  const double t = 1.0 / 900.0;
  for (double p : book.bias) {
    EXPECT_GE(p, t - 1e-12);
    EXPECT_LE(p, 1 - t + 1e-12);
  }
}

TEST(Tardos, HandScore) {
  BinaryCodebook book;
  book.kind = CodeKind::kTardos;
  book.bias = {0.5, 0.5};
  book.codewords = {FromString("11"), FromString("00")};
  book.c = 2;
  book.k = 1;
  const auto acc = tardos_score(FromString("11"), book);
  EXPECT_DOUBLE_EQ(acc.scores[0], 2.0);
  EXPECT_DOUBLE_EQ(acc.scores[1], -2.0);
  EXPECT_EQ(acc.accused, 0);
  const auto zero = tardos_score(FromString("00"), book);
  EXPECT_EQ(zero.scores, (std::vector<double>{0.0, 0.0}));
  EXPECT_TRUE(zero.tie);
}

TEST(Tardos, OwnCodewordScoresHighest) {
  Rng rng(2);
  int hits = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const auto book = tardos_generate(20, 3, 0.01, rng);
    const int user = static_cast<int>(uniform_index(rng, 20));
    hits += tardos_score(book.codewords[static_cast<std::size_t>(user)], book).accused == user;
  }
  EXPECT_GE(hits, 198);
}

TEST(CodeEmbed, ZeroOneAndReadback) {
  const Grid g(10);
  Rng rng(3);
  const std::vector<Cell> cells{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}};
  const PostProcessedTrajectory x("a", cells);
  const MarkMap marks = make_mark_map(cells, g, rng);
  for (std::size_t j = 0; j < cells.size(); ++j) {
    EXPECT_EQ(cell_distance_sq(marks[j], cells[j]) <= 2 && marks[j] != cells[j], true);
  }
  EXPECT_EQ(code_embed(x, Bits(6, 0), marks, false).cells(), cells);
  EXPECT_EQ(code_embed(x, Bits(6, 1), marks, false).cells(), marks);
  for (int trial = 0; trial < 100; ++trial) {
    Bits w(6);
    for (auto& b : w) b = bernoulli(rng, 0.5);
    const auto y = code_embed(x, w, marks, false);
    EXPECT_EQ(read_bits(y.cells(), cells, marks, 6), w);
  }
}

TEST(CodeEmbed, TruncationAndLengthChecks) {
  const Grid g(10);
  Rng rng(4);
  const std::vector<Cell> cells{{1, 1}, {2, 2}, {3, 3}};
  const PostProcessedTrajectory x("a", cells);
  const MarkMap marks = make_mark_map(cells, g, rng);
  EXPECT_THROW(code_embed(x, Bits(5, 1), marks, false), Error);
  const auto y = code_embed(x, FromString("10111"), marks, true);
  EXPECT_EQ(read_bits(y.cells(), cells, marks, 5), FromString("10100"));
  const auto z = code_embed(x, FromString("1"), marks, true);
  EXPECT_EQ(z[1], cells[1]);
}

TEST(CodeEmbed, SharedMarksAgreeOnEqualBits) {
  const Grid g(10);
  Rng rng(5);
  const std::vector<Cell> cells{{1, 1}, {2, 2}, {3, 3}, {4, 4}};
  const PostProcessedTrajectory x("a", cells);
  const MarkMap marks = make_mark_map(cells, g, rng);
  const auto a = code_embed(x, FromString("1010"), marks, false);
  const auto b = code_embed(x, FromString("1001"), marks, false);
  EXPECT_EQ(a[0], b[0]);
  EXPECT_EQ(a[1], b[1]);
  EXPECT_NE(a[2], b[2]);
}

}  // namespace
}  // namespace trajfp
