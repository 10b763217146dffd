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


// Plays one slot of the mechanism by hand: two edge servers bid for three
// devices, the principal matches, prices, and updates its multipliers.

#include <cstdio>

#include "iol/iol.hpp"

int main() {
  iol::MechanismState state(3, {0.6, 0.4}, 0.1, 100);
  state.arm_stats = {{10, 0.2}, {10, 0.5}, {10, 0.8}};
  state.slot = 11;

  const iol::Matrix costs{{0.30, 0.25, 0.40}, {0.35, 0.10, 0.20}};
  const std::vector<iol::AgentPolicy> truthful(2);
  const iol::BidMatrix bids = iol::form_bids(truthful, costs, 0.0, state.slot);

  const iol::EnvRealization world{{0.0, 1.0, 1.0}, costs, state.slot};
  const auto decide = [&costs](const iol::Proposal& p) {
    return iol::decide_participation(p, costs).a;
  };
  const auto out = iol::step(state, bids, world, decide);
  const auto& rec = out.record;

  std::printf("r_hat     ");
  for (double r : rec.reward_estimates) std::printf(" %.4f", r);
  std::printf("\nassignment %s\n", rec.assignment.to_string().c_str());
  for (std::size_t n = 0; n < 2; ++n) {
    std::printf("agent %zu   pay %.4f  payoff %.4f  lambda %.3f -> %.3f\n", n + 1,
                rec.payments[n], rec.payoffs[n], rec.lambda[n], rec.lambda_next[n]);
  }
  std::printf("welfare %.4f  profit %.4f\n", rec.welfare, rec.profit);
  return 0;
}
