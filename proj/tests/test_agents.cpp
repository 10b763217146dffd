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

#include "iol/agents.hpp"

namespace iol {
namespace {

TEST(FormBids, Examples) {
  const std::vector<double> c = {0.3};
  EXPECT_EQ(form_bid_row(AgentPolicy::truthful(), c, 0.0)[0], 0.3);
  EXPECT_EQ(form_bid_row(AgentPolicy::overbid(0.2), std::vector<double>{0.95}, 0.0)[0], 1.0);
  EXPECT_NEAR(form_bid_row(AgentPolicy::underbid(0.1), c, 0.0)[0], 0.2, 1e-15);
  EXPECT_EQ(form_bid_row(AgentPolicy::underbid(0.1), c, 0.25)[0], 0.25);
}

TEST(FormBids, TruthfulIsIdentity) {
  const Matrix costs{{0.11, 0.52}, {0.93, 0.0}};
  const std::vector<AgentPolicy> p(2, AgentPolicy::truthful());
  EXPECT_EQ(form_bids(p, costs, 0.0), costs);
}

TEST(FormBids, SupportAndReproducibility) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  const std::vector<AgentPolicy> p = {AgentPolicy::overbid(0.3), AgentPolicy::underbid(0.4),
                                      AgentPolicy::random_misreport(9, 0.5)};
  for (std::int64_t t = 1; t <= 500; ++t) {
    Matrix costs(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) costs(i, j) = u(rng);
    const auto bids = form_bids(p, costs, 0.1, t);
    for (double b : bids.values()) {
      ASSERT_GE(b, 0.1);
      ASSERT_LE(b, 1.0);
    }
    ASSERT_EQ(bids, form_bids(p, costs, 0.1, t));
  }
}

TEST(FormBids, MisreportStreamsDifferBySlot) {
  const auto p = AgentPolicy::random_misreport(4, 0.2);
  const std::vector<double> c = {0.5, 0.5};
  EXPECT_NE(form_bid_row(p, c, 0.0, 1), form_bid_row(p, c, 0.0, 2));
}

Proposal proposal_one(bool assigned, double pay) {
  Proposal p{Assignment(1, 1), {pay}};
  if (assigned) p.assignment.assign(0, 0);
  return p;
}

TEST(DecideParticipation, Examples) {
  const Matrix c{{0.3}};
  auto d = decide_participation(proposal_one(false, 0.0), c);
  EXPECT_EQ(d.a[0], 1);
  EXPECT_EQ(d.payoffs[0], 0.0);
  d = decide_participation(proposal_one(true, 0.5), c);
  EXPECT_EQ(d.a[0], 1);
  EXPECT_NEAR(d.payoffs[0], 0.2, 1e-15);
  d = decide_participation(proposal_one(true, 0.2), c);
  EXPECT_EQ(d.a[0], 0);
  EXPECT_EQ(d.payoffs[0], 0.0);
  // Exactly zero payoff: participate.
  EXPECT_EQ(decide_participation(proposal_one(true, 0.3), c).a[0], 1);
}

TEST(DecideParticipation, TruthfulAgentsAlwaysFollow) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MechanismState s(3, {0.3, 0.3, 0.4}, 0.2, 2000);
  for (std::int64_t t = 1; t <= 2000; ++t) {
    Matrix costs(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) costs(i, j) = u(rng);
    const auto bids = form_bids(std::vector<AgentPolicy>(3), costs, 0.0, t);
    ParticipationDecision seen;
    const auto decide = [&](const Proposal& p) {
      seen = decide_participation(p, costs);
      return seen.a;
    };
    step(s, bids, {{u(rng), u(rng), u(rng)}, costs, t}, decide);
    for (std::size_t n = 0; n < 3; ++n) {
      ASSERT_EQ(seen.a[n], 1);
      ASSERT_GE(seen.payoffs[n], 0.0);
    }
  }
}

TEST(AgentPolicy, Names) {
  EXPECT_EQ(to_string(AgentPolicy::Kind::kRandomMisreport), "random-misreport");
  EXPECT_EQ(to_string(AgentPolicy::Kind::kOverbid), "overbid");
}

}  // namespace
}  // namespace iol
