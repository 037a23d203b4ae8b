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

#include "trajfp/pim.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "trajfp/harness.h"

namespace trajfp {
namespace {

MarkovModel Identity(const Grid& g) {
  std::vector<std::vector<Transition>> rows(g.cell_count());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = {{static_cast<std::uint32_t>(i), 1.0}};
  return MarkovModel(g, rows, std::vector<double>(g.cell_count(), 1.0));
}

TEST(PriorUpdate, PointMassSplits) {
  const Grid g(3);
  auto rows = std::vector<std::vector<Transition>>(g.cell_count());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = {{static_cast<std::uint32_t>(i), 1.0}};
  rows[0] = {{1, 0.5}, {2, 0.5}};
  const MarkovModel m(g, rows, std::vector<double>(g.cell_count(), 1.0));
  std::vector<double> post(g.cell_count(), 0.0);
  post[0] = 1.0;
  const auto prior = prior_update(post, m);
  EXPECT_DOUBLE_EQ(prior[1], 0.5);
  EXPECT_DOUBLE_EQ(prior[2], 0.5);
}

TEST(PriorUpdate, IdentityAndStationarity) {
  const Grid g(3);
  const MarkovModel id = Identity(g);
  std::vector<double> post{0.1, 0.2, 0.0, 0.3, 0.0, 0.1, 0.1, 0.1, 0.1};
  EXPECT_EQ(prior_update(post, id), post);

  // Doubly stochastic: cyclic shift.
  std::vector<std::vector<Transition>> rows(g.cell_count());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = {{static_cast<std::uint32_t>((i + 1) % 9), 0.5}, {static_cast<std::uint32_t>(i), 0.5}};
  }
  const MarkovModel shift(g, rows, std::vector<double>(9, 1.0));
  const std::vector<double> uniform(9, 1.0 / 9);
  for (double p : prior_update(uniform, shift)) EXPECT_NEAR(p, 1.0 / 9, 1e-15);
}

TEST(DeltaLocationSet, Examples) {
  const Grid g(2);
  EXPECT_EQ(delta_location_set(std::vector<double>{0.995, 0.005, 0, 0}, 0.01, g).size(), 1u);
  EXPECT_EQ(delta_location_set(std::vector<double>{0.25, 0.25, 0.25, 0.25}, 0.01, g).size(), 4u);
  const auto s = delta_location_set(std::vector<double>{0.5, 0.3, 0.15, 0.05}, 0.1, g);
  EXPECT_EQ(s, (std::vector<Cell>{g.cell(0), g.cell(1), g.cell(2)}));
}

TEST(DeltaLocationSet, MinimalBySubsetEnumeration) {
  Rng rng(23);
  const Grid g(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> prior(g.cell_count());
    for (double& p : prior) p = uniform_index(rng, 3) == 0 ? 0.0 : uniform01(rng);
    prior[uniform_index(rng, prior.size())] += 0.1;
    const double total = std::accumulate(prior.begin(), prior.end(), 0.0);
    for (double& p : prior) p /= total;
    const double delta = uniform(rng, 0.001, 0.5);
    const auto set = delta_location_set(prior, delta, g);
    double mass = 0.0;
    double smallest = 1.0;
    for (Cell c : set) {
      mass += prior[g.index(c)];
      smallest = std::min(smallest, prior[g.index(c)]);
    }
    EXPECT_GE(mass, 1.0 - delta - 1e-9);
    EXPECT_LT(mass - smallest, 1.0 - delta);
    EXPECT_EQ(set.size(), oracle::min_cover_size(prior, 1.0 - delta - 1e-12));
  }
}

TEST(IsotropicTransform, RectangleCompressesLongAxis) {
  const ConvexHull rect({{-5, -0.5}, {5, -0.5}, {5, 0.5}, {-5, 0.5}});
  Rng rng(31);
  const auto iso = isotropic_transform(rect, 4096, rng);
  // Covariance diag(a^2 / 12): whitening scales each axis by 1 / side.
  const double ratio = iso.transform.d / iso.transform.a;
  EXPECT_NEAR(ratio, 10.0, 1.5);
  EXPECT_LT(std::abs(iso.transform.b) / iso.transform.d, 0.1);
}

TEST(IsotropicTransform, DiskStaysRound) {
  std::vector<Vec2> ring;
  for (int i = 0; i < 32; ++i) {
    const double a = 2 * std::numbers::pi * i / 32;
    ring.push_back({3 * std::cos(a), 3 * std::sin(a)});
  }
  Rng rng(37);
  const auto iso = isotropic_transform(convex_hull(ring), 4096, rng);
  const double diag = 0.5 * (iso.transform.a + iso.transform.d);
  EXPECT_LT(std::abs(iso.transform.b) / diag, 0.1);
  EXPECT_LT(std::abs(iso.transform.c) / diag, 0.1);
}

TEST(IsotropicTransform, InverseRecoversVertices) {
  const ConvexHull k({{-2, -1}, {3, -1}, {1, 2}, {-1, 1.5}});
  Rng rng(41);
  const auto iso = isotropic_transform(k, 2048, rng);
  const auto back = iso.body.transformed(iso.inverse);
  ASSERT_EQ(back.size(), k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    EXPECT_NEAR(back.vertices()[i].x, k.vertices()[i].x, 1e-9);
    EXPECT_NEAR(back.vertices()[i].y, k.vertices()[i].y, 1e-9);
  }
}

TEST(GammaRadius, MeanIsThreeOverEpsilon) {
  Rng rng(43);
  const double eps = 1.7;
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += gamma_integer_shape(rng, 3, 1.0 / eps);
  // sd of the mean: sqrt(3) / eps / sqrt(n).
  EXPECT_NEAR(sum / n, 3.0 / eps, 5 * std::sqrt(3.0) / eps / std::sqrt(n));
}

TEST(KnormSample, ConcentratesAtLargeEpsilonAndIsDeterministic) {
  const ConvexHull sq({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  Rng rng(47);
  double offset = 0.0;
  for (int i = 0; i < 1000; ++i) offset += norm2(knorm_sample(sq, {2, 3}, 1e6, rng) - Vec2{2, 3});
  EXPECT_LT(offset / 1000, 0.01);
  Rng a(5), b(5);
  const Vec2 za = knorm_sample(sq, {0, 0}, 1.0, a);
  const Vec2 zb = knorm_sample(sq, {0, 0}, 1.0, b);
  EXPECT_EQ(za, zb);
}

IsotropicPosition UnitSquareIdentity() {
  IsotropicPosition iso;
  iso.body = ConvexHull({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  return iso;
}

TEST(PosteriorUpdate, TwoCandidatesMatchBayes) {
  const Grid g(4);
  std::vector<double> prior(g.cell_count(), 0.0);
  prior[g.index({0, 0})] = 0.3;
  prior[g.index({2, 1})] = 0.7;
  const Vec2 z{0.4, 0.9};
  const double eps = 1.3;
  const auto post = posterior_update(prior, z, UnitSquareIdentity(), eps, g);
  // Unit-square gauge is the Chebyshev norm.
  const double l0 = 0.3 * std::exp(-eps * std::max(0.4, 0.9));
  const double l1 = 0.7 * std::exp(-eps * std::max(1.6, 0.1));
  EXPECT_NEAR(post[g.index({0, 0})], l0 / (l0 + l1), 1e-12);
  EXPECT_NEAR(post[g.index({2, 1})], l1 / (l0 + l1), 1e-12);
  EXPECT_NEAR(std::accumulate(post.begin(), post.end(), 0.0), 1.0, 1e-9);
}

TEST(PosteriorUpdate, SymmetryAndConcentration) {
  const Grid g(5);
  std::vector<double> prior(g.cell_count(), 1.0 / 25);
  const auto post = posterior_update(prior, {2.0, 1.5}, UnitSquareIdentity(), 2.0, g);
  EXPECT_NEAR(post[g.index({2, 1})], post[g.index({2, 2})], 1e-12);
  const auto sharp = posterior_update(prior, {3, 3}, UnitSquareIdentity(), 50.0, g);
  EXPECT_GT(sharp[g.index({3, 3})], 0.99);
}

TEST(PosteriorUpdate, AllZeroPriorThrows) {
  const Grid g(2);
  std::vector<double> prior(4, 0.0);
  try {
    posterior_update(prior, {0, 0}, UnitSquareIdentity(), 1.0, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllZeroLikelihood);
  }
}

struct Fixture {
  City city;
  MarkovModel model;
  std::vector<RawTrajectory> raw;
};

Fixture MakeFixture(int count, int length) {
  Rng rng(53);
  City city = make_city(20, rng);
  MarkovModel m = build_model({city.grid, walker_generate(city, 300, 60, rng)});
  std::vector<RawTrajectory> raw;
  for (const auto& t : walker_generate(city, count, length, rng)) raw.push_back(RawTrajectory(t.id, t.cells));
  return {std::move(city), std::move(m), std::move(raw)};
}

TEST(PimRelease, HugeEpsilonIsIdentity) {
  const auto f = MakeFixture(5, 30);
  Rng rng(59);
  for (const auto& t : f.raw) {
    EXPECT_EQ(pim_release(t, f.model, {1e6, 0.01, 256}, rng).cells(), t.cells());
  }
}

TEST(PimRelease, DeterministicAndBeliefsNormalized) {
  const auto f = MakeFixture(3, 25);
  for (const auto& t : f.raw) {
    Rng a(61), b(61);
    std::vector<PimStep> steps;
    const auto x = pim_release(t, f.model, {1.0, 0.01, 512}, a, &steps);
    EXPECT_EQ(x, pim_release(t, f.model, {1.0, 0.01, 512}, b));
    ASSERT_EQ(steps.size(), t.size());
    for (const auto& s : steps) {
      EXPECT_FALSE(s.delta_set.empty());
      EXPECT_TRUE(s.sensitivity.contains({0, 0}));
    }
  }
}

TEST(PimRelease, StrongerPrivacyMovesPointsFarther) {
  const auto f = MakeFixture(100, 20);
  auto displacement = [&](double eps) {
    Rng rng(67);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& t : f.raw) {
      const auto x = pim_release(t, f.model, {eps, 0.01, 512}, rng);
      for (std::size_t j = 0; j < t.size(); ++j, ++n) sum += cell_distance(x[j], t[j]);
    }
    return sum / static_cast<double>(n);
  };
  EXPECT_GT(displacement(0.9), displacement(2.5));
}

TEST(PimParams, Validation) {
  EXPECT_THROW((PimParams{0.0, 0.01, 4096}.validate()), Error);
  EXPECT_THROW((PimParams{1.0, 1.0, 4096}.validate()), Error);
  EXPECT_THROW((PimParams{1.0, 0.01, 1}.validate()), Error);
}

}  // namespace
}  // namespace trajfp
