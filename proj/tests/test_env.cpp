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


#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "iol/env.hpp"

namespace iol {
namespace {

CostModel normal_costs(double c_min, double mu = 0.3, double sigma = 0.1) {
  CostModel m;
  m.kind = CostModel::Kind::kTruncatedNormal;
  m.c_min = c_min;
  m.mu = mu;
  m.sigma = sigma;
  return m;
}

CostModel edge_costs(double c_min = 0.0) {
  CostModel m;
  m.kind = CostModel::Kind::kEdgeComputing;
  m.c_min = c_min;
  m.price_series_id = "builtin:synthetic";
  m.prices = std::make_shared<const PriceSeries>(synthetic_price_series());
  return m;
}

TEST(SampleSlot, CertainArmAlwaysPays) {
  Environment env({ArmSpec::bernoulli(1.0)}, normal_costs(0.0), 1, 7);
  for (std::int64_t t = 1; t <= 1000; ++t) EXPECT_EQ(env.sample_slot(t).rewards[0], 1.0);
}

TEST(SampleSlot, DegenerateCostSupport) {
  Environment env({ArmSpec::bernoulli(0.5), ArmSpec::uniform(0.2, 0.6)}, normal_costs(1.0), 3, 7);
  for (std::int64_t t = 1; t <= 200; ++t) {
    const auto r = env.sample_slot(t);
    for (double c : r.costs.values()) EXPECT_EQ(c, 1.0);
  }
}

TEST(SampleSlot, BernoulliMeanConverges) {
  Environment env({ArmSpec::bernoulli(0.9)}, normal_costs(0.0), 1, 11);
  double total = 0.0;
  for (std::int64_t t = 1; t <= 100000; ++t) total += env.sample_slot(t).rewards[0];
  EXPECT_NEAR(total / 1e5, 0.9, 0.01);
}

TEST(SampleSlot, ReplayIsBitIdentical) {
  Environment a({ArmSpec::bernoulli(0.3), ArmSpec::uniform(0.1, 0.9)}, edge_costs(), 2, 99);
  Environment b({ArmSpec::bernoulli(0.3), ArmSpec::uniform(0.1, 0.9)}, edge_costs(), 2, 99);
  for (std::int64_t t : {5, 1, 77, 5, 3000}) {
    const auto ra = a.sample_slot(t);
    const auto rb = b.sample_slot(t);
    EXPECT_EQ(ra.rewards, rb.rewards);
    EXPECT_EQ(ra.costs, rb.costs);
  }
}

TEST(SampleSlot, DistinctSlotsDrawFreshly) {
  Environment env({ArmSpec::uniform(0.0, 1.0)}, normal_costs(0.0), 2, 5);
  EXPECT_NE(env.sample_slot(1).rewards, env.sample_slot(2).rewards);
  EXPECT_NE(env.sample_slot(1).costs, env.sample_slot(2).costs);
  EXPECT_THROW(env.sample_slot(0), ValidationError);
}

TEST(SampleSlot, SupportContainmentAndMeans) {
  const std::vector<ArmSpec> arms = {ArmSpec::bernoulli(0.1), ArmSpec::bernoulli(0.7),
                                     ArmSpec::uniform(0.2, 0.8), ArmSpec::uniform(0.0, 1.0)};
  for (const CostModel& cm : {normal_costs(0.1), edge_costs(0.02)}) {
    Environment env(arms, cm, 2, 3);
    std::vector<double> totals(arms.size(), 0.0);
    constexpr int kSamples = 100000;
    for (std::int64_t t = 1; t <= kSamples; ++t) {
      const auto r = env.sample_slot(t);
      for (std::size_t k = 0; k < arms.size(); ++k) {
        ASSERT_GE(r.rewards[k], 0.0);
        ASSERT_LE(r.rewards[k], 1.0);
        totals[k] += r.rewards[k];
      }
      for (double c : r.costs.values()) {
        ASSERT_GE(c, cm.c_min);
        ASSERT_LE(c, 1.0);
      }
    }
    for (std::size_t k = 0; k < arms.size(); ++k) {
      EXPECT_LT(std::abs(totals[k] / kSamples - arms[k].mean_reward),
                4.0 * arms[k].stddev() / std::sqrt(double{kSamples}))
          << "arm " << k;
    }
  }
}

TEST(ArmSpec, Validation) {
  EXPECT_THROW(ArmSpec::bernoulli(1.5).validate(), ValidationError);
  EXPECT_THROW(ArmSpec::uniform(0.5, 1.2).validate(), ValidationError);
  EXPECT_THROW(ArmSpec::uniform(0.7, 0.2).validate(), ValidationError);
  EXPECT_DOUBLE_EQ(ArmSpec::uniform(0.2, 0.6).mean_reward, 0.4);
}

TEST(PriceSeries, MinimalFile) {
  const auto s = load_price_series(std::string("slot,price\n1,0.05\n2,0.07"));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.price_at(1), 0.05);
  EXPECT_EQ(s.price_at(2), 0.07);
}

TEST(PriceSeries, NegativePriceRejected) {
  try {
    load_price_series(std::string("slot,price\n1,-0.1"));
    FAIL();
  } catch (const NegativePriceError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
}

TEST(PriceSeries, EmptyBodyRejected) {
  EXPECT_THROW(load_price_series(std::string("slot,price\n")), EmptySeriesError);
  EXPECT_THROW(load_price_series(std::string("")), EmptySeriesError);
}

TEST(PriceSeries, MalformedRowsCarryRowNumber) {
  for (const char* bad : {"slot,price\n1,0.1\n2,abc\n", "slot,price\n1,0.1\n2\n",
                          "slot,price\n1,0.1\n1,0.2\n", "time,value\n1,0.1\n"}) {
    try {
      load_price_series(std::string(bad));
      ADD_FAILURE() << bad;
    } catch (const ParseError& e) {
      EXPECT_GE(e.row(), 1u);
    }
  }
}

TEST(PriceSeries, WrapsCyclically) {
  const auto s = load_price_series(std::string("slot,price\n1,1\n2,2\n3,3\n"));
  EXPECT_EQ(s.period(), 3);
  EXPECT_EQ(s.price_at(4), 1.0);
  EXPECT_EQ(s.price_at(8), 2.0);
  EXPECT_EQ(s.price_at(3000), 3.0);
}

TEST(PriceSeries, GapsHoldLastPrice) {
  const auto s = load_price_series(std::string("slot,price\n1,1\n4,2\n"));
  EXPECT_EQ(s.price_at(3), 1.0);
  EXPECT_EQ(s.price_at(4), 2.0);
  EXPECT_EQ(s.price_at(5), 1.0);
}

TEST(PriceSeries, CsvRoundTrip) {
  const auto s = synthetic_price_series();
  EXPECT_EQ(s.size(), 168u);
  EXPECT_EQ(load_price_series(to_csv(s)), s);
  for (const auto& e : s.entries()) {
    EXPECT_GE(e.price, 0.0);
    EXPECT_LE(e.price * 0.1, 1.0);
  }
}

TEST(PriceSeries, ByteOrderMarkTolerated) {
  const auto s = load_price_series(std::string("\xEF\xBB\xBFslot,price\n1,0.5\n"));
  EXPECT_EQ(s.price_at(1), 0.5);
}

TEST(CostModel, EdgeComputingIsPriceTimesEnergy) {
  CostModel m = edge_costs(0.0);
  m.prices = std::make_shared<const PriceSeries>(
      load_price_series(std::string("slot,price\n1,2\n2,0\n")));
  m.energy_sigma = 0.0;  // energy pinned at its mean
  std::mt19937_64 rng(1);
  EXPECT_DOUBLE_EQ(m.sample(rng, 1), 2.0 * 0.05);
  EXPECT_EQ(m.sample(rng, 2), 0.0);
  m.c_min = 0.2;
  EXPECT_EQ(m.sample(rng, 1), 0.2);
}

TEST(TruncatedNormal, RejectsEmptyMass) {
  EXPECT_THROW((TruncatedNormal{5.0, 0.01, 0.0, 1.0}.validate()), ValidationError);
  EXPECT_NO_THROW((TruncatedNormal{0.2, 0.1, 0.0, 1.0}.validate()));
}

}  // namespace
}  // namespace iol
