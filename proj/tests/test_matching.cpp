// Copyright 2026 The IOL Authors. All rights reserved.
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


#include <random>

#include <gtest/gtest.h>

#include "iol/matching.hpp"

namespace iol {
namespace {

Matrix random_weights(std::mt19937_64& rng, std::size_t n, std::size_t k, double lo = -1.0,
                      double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix w(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) w(i, j) = u(rng);
  }
  return w;
}

// Weights on a coarse lattice so exact ties are common.
Matrix tied_weights(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::uniform_int_distribution<int> u(-2, 3);
  Matrix w(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) w(i, j) = 0.25 * u(rng);
  }
  return w;
}

TEST(MaxWeightMatching, SinglePositiveEdge) {
  const auto r = max_weight_matching(Matrix{{0.5}});
  EXPECT_TRUE(r.assignment.x(0, 0));
  EXPECT_EQ(r.total_weight, 0.5);
}

TEST(MaxWeightMatching, NegativeEdgeDropped) {
  const auto r = max_weight_matching(Matrix{{-0.2}});
  EXPECT_TRUE(r.assignment.empty());
  EXPECT_EQ(r.total_weight, 0.0);
}

TEST(MaxWeightMatching, ZeroEdgeDropped) {
  EXPECT_TRUE(max_weight_matching(Matrix{{0.0, 0.0}}).assignment.empty());
}

TEST(MaxWeightMatching, CrossAssignment) {
  const auto r = max_weight_matching(Matrix{{0.9, 0.8}, {0.7, 0.1}});
  EXPECT_EQ(r.assignment.arm_of(0), 1);
  EXPECT_EQ(r.assignment.arm_of(1), 0);
  EXPECT_DOUBLE_EQ(r.total_weight, 1.5);
}

TEST(MaxWeightMatching, LexicographicTieBreak) {
  // Both (1->1, 2->2) and (1->2, 2->1) weigh 2.
  const auto r = max_weight_matching(Matrix{{1.0, 1.0}, {1.0, 1.0}});
  EXPECT_EQ(r.assignment.to_string(), "1:1;2:2");
  // One agent, equal arms: lowest arm.
  EXPECT_EQ(max_weight_matching(Matrix{{0.3, 0.3, 0.3}}).assignment.to_string(), "1:1");
  // Two agents want one arm equally: agent 1.
  EXPECT_EQ(max_weight_matching(Matrix{{0.4}, {0.4}}).assignment.to_string(), "1:1");
}

TEST(MaxWeightMatching, RectangularShapes) {
  const auto tall = max_weight_matching(Matrix{{0.1}, {0.9}, {0.5}});
  EXPECT_EQ(tall.assignment.to_string(), "2:1");
  const auto wide = max_weight_matching(Matrix{{0.1, 0.9, 0.5}});
  EXPECT_EQ(wide.assignment.to_string(), "1:2");
  EXPECT_TRUE(max_weight_matching(Matrix(0, 3)).assignment.empty());
  EXPECT_TRUE(max_weight_matching(Matrix(2, 0)).assignment.empty());
}

TEST(MaxWeightMatching, RejectsNonFinite) {
  EXPECT_THROW(max_weight_matching(Matrix{{std::nan("")}}), ValidationError);
}

TEST(BruteForce, AgreesOnSmallCases) {
  EXPECT_EQ(brute_force_matching(Matrix{{0.5}}).assignment,
            max_weight_matching(Matrix{{0.5}}).assignment);
  EXPECT_TRUE(brute_force_matching(Matrix{{-0.1, -0.3}, {-0.2, -0.5}}).assignment.empty());
  EXPECT_DOUBLE_EQ(brute_force_matching(Matrix{{0.9, 0.8}, {0.7, 0.1}}).total_weight, 1.5);
}

TEST(BruteForce, SizeGuard) {
  EXPECT_EQ(count_partial_matchings(2, 2), 7.0);
  EXPECT_EQ(count_partial_matchings(3, 3), 34.0);
  EXPECT_THROW(brute_force_matching(Matrix(10, 10, 0.5)), InstanceTooLargeError);
}

TEST(MatchingProperty, EqualsBruteForceOnRandomInstances) {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 3000; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    const std::size_t n = dim(rng), k = dim(rng);
    const Matrix w = trial % 2 ? random_weights(rng, n, k) : tied_weights(rng, n, k);
    const auto fast = max_weight_matching(w);
    const auto slow = brute_force_matching(w);
    ASSERT_TRUE(fast.assignment.is_feasible());
    ASSERT_NEAR(fast.total_weight, slow.total_weight, 1e-12) << trial;
    ASSERT_EQ(fast.assignment, slow.assignment) << trial;
    ASSERT_EQ(max_weight_value(w), fast.total_weight) << trial;
  }
}

TEST(MatchingProperty, NeverSelectsNonPositiveEdges) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix w = tied_weights(rng, 5, 4);
    for (const auto& [n, k] : max_weight_matching(w).assignment.edges()) {
      EXPECT_GT(w(n, k), 0.0);
    }
  }
}

TEST(MatchingProperty, MonotoneDeletion) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix w = random_weights(rng, 4, 3);
    const double full = max_weight_value(w);
    for (std::size_t n = 0; n < w.rows(); ++n) {
      EXPECT_LE(max_weight_value(w.without_row(n)), full + 1e-12);
    }
  }
}

TEST(MatchingProperty, ScaleCovariantArgmax) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix w = trial % 2 ? random_weights(rng, 4, 4) : tied_weights(rng, 4, 4);
    for (double scale : {0.5, 2.0, 8.0}) {
      Matrix s = w;
      for (std::size_t i = 0; i < w.rows(); ++i) {
        for (std::size_t j = 0; j < w.cols(); ++j) s(i, j) *= scale;
      }
      EXPECT_EQ(max_weight_matching(s).assignment, max_weight_matching(w).assignment);
    }
  }
}

TEST(MatchingProperty, LargerInstancesStayFeasibleAndOptimalAgainstDual) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix w = random_weights(rng, 12, 7);
    const auto r = max_weight_matching(w);
    EXPECT_TRUE(r.assignment.is_feasible());
    EXPECT_EQ(r.total_weight, max_weight_value(w));
  }
}

}  // namespace
}  // namespace iol
