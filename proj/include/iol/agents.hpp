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

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "iol/common.hpp"
#include "iol/mechanism.hpp"

namespace iol {

// How an agent turns its true costs into bids.
struct AgentPolicy {
  enum class Kind { kTruthful, kOverbid, kUnderbid, kRandomMisreport };

  Kind kind = Kind::kTruthful;
  double delta = 0.0;       // shift for over/underbid, spread for misreport
  std::uint64_t seed = 0;   // misreport stream

  static AgentPolicy truthful() { return {}; }
  static AgentPolicy overbid(double d) { return {Kind::kOverbid, d, 0}; }
  static AgentPolicy underbid(double d) { return {Kind::kUnderbid, d, 0}; }
  static AgentPolicy random_misreport(std::uint64_t s, double spread = 0.2) {
    return {Kind::kRandomMisreport, spread, s};
  }

  friend bool operator==(const AgentPolicy&, const AgentPolicy&) = default;
};

inline std::string to_string(AgentPolicy::Kind kind) {
  switch (kind) {
    case AgentPolicy::Kind::kTruthful: return "truthful";
    case AgentPolicy::Kind::kOverbid: return "overbid";
    case AgentPolicy::Kind::kUnderbid: return "underbid";
    case AgentPolicy::Kind::kRandomMisreport: return "random-misreport";
  }
  return "unknown";
}

// Bid row for one agent. Misreports draw from a stream keyed on (seed, slot,
// agent) so reruns reproduce them.
inline std::vector<double> form_bid_row(const AgentPolicy& policy,
                                        std::span<const double> true_costs,
                                        double c_min, std::int64_t slot = 1,
                                        std::size_t agent = 0) {
  std::vector<double> bids(true_costs.begin(), true_costs.end());
  if (policy.kind == AgentPolicy::Kind::kTruthful) return bids;
  std::mt19937_64 rng(mix_seed(policy.seed,
                               static_cast<std::uint64_t>(slot) * 1000003ULL + agent));
  std::uniform_real_distribution<double> u(-policy.delta, policy.delta);
  for (double& b : bids) {
    switch (policy.kind) {
      case AgentPolicy::Kind::kOverbid: b += policy.delta; break;
      case AgentPolicy::Kind::kUnderbid: b -= policy.delta; break;
      case AgentPolicy::Kind::kRandomMisreport: b += u(rng); break;
      case AgentPolicy::Kind::kTruthful: break;
    }
    b = std::clamp(b, c_min, 1.0);
  }
  return bids;
}

inline BidMatrix form_bids(std::span<const AgentPolicy> policies,
                           const Matrix& true_costs, double c_min,
                           std::int64_t slot = 1) {
  require_size(policies.size(), true_costs.rows(), "policies");
  BidMatrix bids(true_costs.rows(), true_costs.cols());
  for (std::size_t n = 0; n < true_costs.rows(); ++n) {
    const auto row = form_bid_row(policies[n], true_costs.row(n), c_min, slot, n);
    std::copy(row.begin(), row.end(), bids.row(n).begin());
  }
  return bids;
}

struct ParticipationDecision {
  std::vector<int> a;           // 1 = follow the proposal
  std::vector<double> payoffs;  // payoff if followed, 0 if declined
};

// Follow iff payment covers the true cost of the assigned arm; a zero payoff
// counts as following.
inline ParticipationDecision decide_participation(const Proposal& proposal,
                                                  const Matrix& true_costs) {
  const std::size_t n_agents = proposal.assignment.num_agents();
  require_size(proposal.payments.size(), n_agents, "payments");
  require_shape(true_costs, n_agents, proposal.assignment.num_arms(), "true_costs");
  ParticipationDecision d;
  d.a.assign(n_agents, 0);
  d.payoffs.assign(n_agents, 0.0);
  for (std::size_t n = 0; n < n_agents; ++n) {
    double cost = 0.0;
    if (proposal.assignment.is_assigned(n)) {
      cost = true_costs(n, static_cast<std::size_t>(proposal.assignment.arm_of(n)));
    }
    const double payoff = proposal.payments[n] - cost;
    if (payoff >= 0.0) {
      d.a[n] = 1;
      d.payoffs[n] = payoff;
    }
  }
  return d;
}

}  // namespace iol
