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

// The principal's side of incentivized online learning. Each slot:
//   1. optimistic reward estimates from per-arm counters (UCB),
//   2. an assignment maximizing estimated reward minus bid cost minus the
//      per-agent fairness multiplier,
//   3. VCG-style payments: an agent's contribution net of its multiplier,
//      minus the welfare loss its presence inflicts on the others,
//   4. agents accept or decline; played arms reveal their rewards,
//   5. multipliers take a projected step toward the utilization targets.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iol/common.hpp"
#include "iol/env.hpp"
#include "iol/matching.hpp"

namespace iol {

struct ArmStats {
  std::int64_t pulls = 0;       // observations so far
  double empirical_mean = 0.0;  // meaningless while pulls == 0

  friend bool operator==(const ArmStats&, const ArmStats&) = default;
};

// Bid matrix: agents x arms, each entry a claimed cost.
using BidMatrix = Matrix;

struct Proposal {
  Assignment assignment;
  std::vector<double> payments;
};

// Settled outcome of one slot.
struct SlotRecord {
  std::int64_t slot = 0;
  std::vector<double> reward_estimates;  // r_hat, per arm
  BidMatrix bids;
  Assignment assignment;
  std::vector<double> payments;
  std::vector<int> participation;
  std::vector<double> payoffs;      // per-agent payoff against true costs
  std::vector<double> lambda;       // multipliers used this slot
  std::vector<double> lambda_next;  // after the dual step
  std::vector<double> utilization;  // f_n in {0,1}
  double reward = 0.0;   // realized reward of played arms
  double cost = 0.0;     // true cost of participating agents
  double welfare = 0.0;  // reward - cost
  double payment = 0.0;  // total paid to participating agents
  double profit = 0.0;   // reward - payment
};

// Upper confidence index for one arm, capped at the maximal reward 1. An arm
// with no observations is optimistic at 1.
inline double ucb_estimate(const ArmStats& stats, std::int64_t slot) {
  if (slot < 1) throw ValidationError("ucb_estimate: slot must be >= 1");
  if (stats.pulls == 0) return 1.0;
  const double bonus =
      std::sqrt(3.0 * std::log(static_cast<double>(slot)) /
                (2.0 * static_cast<double>(stats.pulls)));
  return std::min(stats.empirical_mean + bonus, 1.0);
}

// w(n,k) = r_hat[k] - bid(n,k) - lambda[n]. The constant sum_n lambda_n phi_n
// of the Lagrangian is omitted; it does not move the argmax.
inline Matrix assemble_lagrangian_weights(std::span<const double> r_hat,
                                          const BidMatrix& bids,
                                          std::span<const double> lambda) {
  require_shape(bids, lambda.size(), r_hat.size(), "bids");
  Matrix w(bids.rows(), bids.cols());
  for (std::size_t n = 0; n < bids.rows(); ++n) {
    for (std::size_t k = 0; k < bids.cols(); ++k) {
      w(n, k) = r_hat[k] - bids(n, k) - lambda[n];
    }
  }
  return w;
}

// Derived quantities of the utilization targets phi.
inline double total_target(std::span<const double> phi) {
  return std::accumulate(phi.begin(), phi.end(), 0.0);
}
inline double theta(std::size_t num_arms, std::span<const double> phi) {
  return std::min(static_cast<double>(num_arms) + total_target(phi),
                  static_cast<double>(phi.size()));
}

// eta = (4K + 2 sqrt(6 K T Phi ln T)) / (T Theta).
inline double tuned_step_size(std::size_t num_arms, std::int64_t horizon,
                                 std::span<const double> phi) {
  if (horizon < 2) throw ValidationError("step size needs T >= 2");
  const double big_phi = total_target(phi);
  const double big_theta = theta(num_arms, phi);
  if (!(big_phi > 0.0) || !(big_theta > 0.0)) {
    throw ValidationError("step size needs Phi > 0 and Theta > 0");
  }
  const double k = static_cast<double>(num_arms);
  const double t = static_cast<double>(horizon);
  return (4.0 * k + 2.0 * std::sqrt(6.0 * k * t * big_phi * std::log(t))) /
         (t * big_theta);
}

struct MechanismState {
  std::vector<ArmStats> arm_stats;
  std::vector<double> lambda;
  double eta = 0.0;
  std::int64_t slot = 1;  // next slot to play
  std::vector<double> phi;
  std::int64_t horizon = 0;

  MechanismState() = default;
  MechanismState(std::size_t num_arms, std::vector<double> targets, double step,
                 std::int64_t T)
      : arm_stats(num_arms),
        lambda(targets.size(), 0.0),
        eta(step),
        phi(std::move(targets)),
        horizon(T) {
    validate();
  }

  std::size_t num_arms() const { return arm_stats.size(); }
  std::size_t num_agents() const { return phi.size(); }
  double big_phi() const { return total_target(phi); }
  double big_theta() const { return theta(num_arms(), phi); }

  void validate() const {
    if (arm_stats.empty()) throw ValidationError("mechanism needs at least one arm");
    if (phi.empty()) throw ValidationError("mechanism needs at least one agent");
    require_size(lambda.size(), phi.size(), "lambda");
    if (!(eta > 0.0)) throw ValidationError("step size must be > 0");
    for (double p : phi) {
      if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("phi must lie in [0,1]");
    }
    for (double l : lambda) {
      if (!(l >= 0.0)) throw ValidationError("lambda must be >= 0");
    }
  }

  std::vector<double> reward_estimates() const {
    std::vector<double> r(arm_stats.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = ucb_estimate(arm_stats[k], slot);
    return r;
  }

  friend bool operator==(const MechanismState&, const MechanismState&) = default;
};

inline Assignment compute_assignment(const MechanismState& state,
                                     std::span<const double> r_hat,
                                     const BidMatrix& bids) {
  require_size(r_hat.size(), state.num_arms(), "r_hat");
  return max_weight_matching(assemble_lagrangian_weights(r_hat, bids, state.lambda))
      .assignment;
}

// Welfare-loss bracket  L*_{-n} - L_{-n}(x_hat)  for agent n. Both terms use
// only the other agents' weights.
inline double externality(const Matrix& weights, const Assignment& x_hat,
                          std::size_t agent) {
  double others = 0.0;
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    if (i == agent || !x_hat.is_assigned(i)) continue;
    others += weights(i, static_cast<std::size_t>(x_hat.arm_of(i)));
  }
  const double best_without = max_weight_value(weights.without_row(agent));
  return best_without - others;
}

// Payment to each agent: (r_hat[k] - lambda_n) on its assigned arm, minus its
// externality on the others. Unassigned agents are paid exactly 0: with x_hat
// optimal and agent n idle, x_hat already maximizes the others' objective.
inline std::vector<double> compute_payments(const MechanismState& state,
                                            std::span<const double> r_hat,
                                            const BidMatrix& bids,
                                            const Assignment& x_hat) {
  require_size(r_hat.size(), state.num_arms(), "r_hat");
  if (x_hat.num_agents() != state.num_agents() || x_hat.num_arms() != state.num_arms()) {
    throw DimensionError("compute_payments: assignment shape mismatch");
  }
  if (!x_hat.is_feasible()) throw ValidationError("compute_payments: infeasible assignment");
  const Matrix w = assemble_lagrangian_weights(r_hat, bids, state.lambda);
  std::vector<double> pay(state.num_agents(), 0.0);
  for (std::size_t n = 0; n < state.num_agents(); ++n) {
    if (!x_hat.is_assigned(n)) continue;
    const auto k = static_cast<std::size_t>(x_hat.arm_of(n));
    pay[n] = (r_hat[k] - state.lambda[n]) - externality(w, x_hat, n);
  }
  return pay;
}

// f_n = sum_k x(n,k) a_n.
inline std::vector<double> utilization(const Assignment& x_hat,
                                       std::span<const int> participation) {
  require_size(participation.size(), x_hat.num_agents(), "participation");
  std::vector<double> f(x_hat.num_agents(), 0.0);
  for (std::size_t n = 0; n < f.size(); ++n) {
    f[n] = (x_hat.is_assigned(n) && participation[n] != 0) ? 1.0 : 0.0;
  }
  return f;
}

// lambda_n <- max(0, lambda_n + eta (f_n - phi_n)): ascent on over-use.
inline std::vector<double> dual_update(const MechanismState& state,
                                       const Assignment& x_hat,
                                       std::span<const int> participation) {
  const auto f = utilization(x_hat, participation);
  std::vector<double> next(state.num_agents());
  for (std::size_t n = 0; n < next.size(); ++n) {
    next[n] = std::max(0.0, state.lambda[n] + state.eta * (f[n] - state.phi[n]));
  }
  return next;
}

// Running-mean update for arms actually played this slot. `realized_rewards`
// is indexed by arm; entries of unplayed arms are never read.
inline std::vector<ArmStats> update_arm_stats(const MechanismState& state,
                                              const Assignment& x_hat,
                                              std::span<const int> participation,
                                              std::span<const double> realized_rewards) {
  require_size(participation.size(), state.num_agents(), "participation");
  require_size(realized_rewards.size(), state.num_arms(), "realized_rewards");
  std::vector<ArmStats> next = state.arm_stats;
  for (std::size_t n = 0; n < state.num_agents(); ++n) {
    if (!x_hat.is_assigned(n) || participation[n] == 0) continue;
    const auto k = static_cast<std::size_t>(x_hat.arm_of(n));
    ArmStats& s = next[k];
    const double total = s.empirical_mean * static_cast<double>(s.pulls) +
                         realized_rewards[k];
    s.pulls += 1;
    s.empirical_mean = total / static_cast<double>(s.pulls);
  }
  return next;
}

// Decision callback: given the announced proposal, returns a_n for each agent.
using DecisionFn = std::function<std::vector<int>(const Proposal&)>;

struct StepResult {
  Proposal proposal;
  SlotRecord record;
};

// Plays one slot and advances the state in place. `realization` carries the
// environment's true rewards and costs; only rewards of arms that are played
// reach the counters.
inline StepResult step(MechanismState& state, const BidMatrix& bids,
                       const EnvRealization& realization, const DecisionFn& decide) {
  if (state.slot > state.horizon) {
    throw ValidationError("step: slot " + std::to_string(state.slot) +
                          " exceeds horizon " + std::to_string(state.horizon));
  }
  require_shape(bids, state.num_agents(), state.num_arms(), "bids");
  require_size(realization.rewards.size(), state.num_arms(), "realization rewards");
  require_shape(realization.costs, state.num_agents(), state.num_arms(),
                "realization costs");

  StepResult out;
  SlotRecord& rec = out.record;
  rec.slot = state.slot;
  rec.reward_estimates = state.reward_estimates();
  rec.bids = bids;
  rec.lambda = state.lambda;

  out.proposal.assignment = compute_assignment(state, rec.reward_estimates, bids);
  out.proposal.payments =
      compute_payments(state, rec.reward_estimates, bids, out.proposal.assignment);
  rec.assignment = out.proposal.assignment;
  rec.payments = out.proposal.payments;

  rec.participation = decide(out.proposal);
  require_size(rec.participation.size(), state.num_agents(), "participation");
  rec.utilization = utilization(rec.assignment, rec.participation);

  rec.payoffs.assign(state.num_agents(), 0.0);
  for (std::size_t n = 0; n < state.num_agents(); ++n) {
    if (rec.participation[n] == 0) continue;
    double agent_cost = 0.0;
    if (rec.assignment.is_assigned(n)) {
      const auto k = static_cast<std::size_t>(rec.assignment.arm_of(n));
      agent_cost = realization.costs(n, k);
      rec.reward += realization.rewards[k];
      rec.cost += agent_cost;
    }
    rec.payment += rec.payments[n];
    rec.payoffs[n] = rec.payments[n] - agent_cost;
  }
  rec.welfare = rec.reward - rec.cost;
  rec.profit = rec.reward - rec.payment;

  state.arm_stats =
      update_arm_stats(state, rec.assignment, rec.participation, realization.rewards);
  state.lambda = dual_update(state, rec.assignment, rec.participation);
  rec.lambda_next = state.lambda;
  state.slot += 1;
  return out;
}

}  // namespace iol
