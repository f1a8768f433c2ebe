// Copyright 2026 The SubZeroCore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subzero/similarity.hpp"

#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace subzero {
namespace {

TEST(PairwiseDistances, OneDimensional) {
  auto d = pairwise_distances(Matrix::from_rows({{0}, {3}, {4}}));
  EXPECT_EQ(d(0, 1), 3.0);
  EXPECT_EQ(d(0, 2), 4.0);
  EXPECT_EQ(d(1, 2), 1.0);
  EXPECT_EQ(d(2, 1), 1.0);
}

TEST(PairwiseDistances, ThreeFourFive) {
  auto d = pairwise_distances(Matrix::from_rows({{0, 0}, {3, 4}}));
  EXPECT_EQ(d(0, 1), 5.0);
}

TEST(PairwiseDistances, SingleRow) {
  auto d = pairwise_distances(Matrix::from_rows({{1.5, -2}}));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d(0, 0), 0.0);
}

TEST(PairwiseDistances, RejectsNonFiniteAndOversize) {
  EXPECT_THROW(pairwise_distances(Matrix::from_rows(
                   {{0}, {std::numeric_limits<double>::infinity()}})),
               InputError);
  Matrix big(5, 2, 1.0);
  EXPECT_THROW(pairwise_distances(big, 1, 4), InputError);
}

TEST(PairwiseDistances, MetricPropertiesOnRandomClouds) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(25);
    const std::size_t d = 1 + rng.below(6);
    auto rows = testing::random_cloud(rng, n, d);
    auto dist = pairwise_distances(rows);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(dist(i, i), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_GE(dist(i, j), 0.0);
        EXPECT_EQ(dist(i, j), dist(j, i));
        for (std::size_t k = 0; k < n; ++k) {
          EXPECT_LE(dist(i, k), dist(i, j) + dist(j, k) + 1e-9);
        }
      }
    }
  }
}

TEST(PairwiseDistances, IndependentOfThreadCount) {
  Rng rng(5);
  auto rows = testing::random_cloud(rng, 157, 9);
  auto one = pairwise_distances(rows, 1);
  EXPECT_EQ(one.values, pairwise_distances(rows, 4).values);
  EXPECT_EQ(one.values, pairwise_distances(rows, 8).values);
  auto sim = pairwise_similarities(rows, Kernel::shifted_cosine(), 1);
  EXPECT_EQ(sim.values,
            pairwise_similarities(rows, Kernel::shifted_cosine(), 7).values);
}

TEST(PairwiseSimilarities, OrthogonalAndAntipodal) {
  auto orth = pairwise_similarities(Matrix::from_rows({{1, 0}, {0, 1}}),
                                    Kernel::shifted_cosine());
  EXPECT_EQ(orth(0, 1), 0.5);
  EXPECT_EQ(orth(0, 0), 1.0);
  auto anti = pairwise_similarities(Matrix::from_rows({{1, 0}, {-1, 0}}),
                                    Kernel::shifted_cosine());
  EXPECT_EQ(anti(0, 1), 0.0);
  auto raw = pairwise_similarities(Matrix::from_rows({{1, 0}, {-1, 0}}),
                                   Kernel::cosine());
  EXPECT_EQ(raw(0, 1), -1.0);
}

TEST(PairwiseSimilarities, ZeroNormRowNamed) {
  try {
    pairwise_similarities(Matrix::from_rows({{0, 0}, {1, 0}}),
                          Kernel::cosine());
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "zero-norm row 0");
  }
  // rbf has no norm requirement.
  EXPECT_NO_THROW(pairwise_similarities(Matrix::from_rows({{0, 0}, {1, 0}}),
                                        Kernel::rbf(1.0)));
}

TEST(PairwiseSimilarities, RangesAndSymmetry) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    auto rows = testing::random_cloud(rng, n, 1 + rng.below(5));
    for (auto kernel :
         {Kernel::shifted_cosine(), Kernel::cosine(), Kernel::rbf(0.7)}) {
      auto sim = pairwise_similarities(rows, kernel);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_EQ(sim(i, i), 1.0);
        for (std::size_t j = 0; j < n; ++j) {
          EXPECT_EQ(sim(i, j), sim(j, i));
          const double lo = kernel.type == Kernel::Type::kCosine ? -1.0 : 0.0;
          EXPECT_GE(sim(i, j), lo);
          EXPECT_LE(sim(i, j), 1.0);
        }
      }
    }
  }
}

TEST(PairwiseSimilarities, RbfStrictlyDecreasingInDistance) {
  Rng rng(21);
  auto rows = testing::random_cloud(rng, 30, 3);
  auto dist = pairwise_distances(rows);
  auto sim = pairwise_similarities(rows, Kernel::rbf(0.8));
  for (std::size_t a = 0; a < 30; ++a) {
    for (std::size_t b = 0; b < 30; ++b) {
      for (std::size_t c = 0; c < 30; ++c) {
        if (dist(a, b) < dist(a, c)) {
          EXPECT_GT(sim(a, b), sim(a, c));
        }
      }
    }
  }
  EXPECT_NEAR(sim(0, 1), std::exp(-dist(0, 1) * dist(0, 1) / (2 * 0.64)),
              1e-12);
}

}  // namespace
}  // namespace subzero
