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

// Social-welfare baselines and cumulative metric accounting.
//
//   S*  informed optimum: mean rewards known, costs revealed, utilization of
//       agent n at most phi_n in expectation.
//   S+  (s_dagger) the same with every cost at c_min; a fractional knapsack.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iol/common.hpp"
#include "iol/linear_program.hpp"
#include "iol/matching.hpp"
#include "iol/mechanism.hpp"

namespace iol {

// Greedy fractional knapsack: arms by (r_k - c_min) descending, unit caps,
// total mass Phi.
inline double s_dagger(std::span<const double> mean_rewards, double c_min,
                       std::span<const double> phi) {
  std::vector<double> net(mean_rewards.begin(), mean_rewards.end());
  for (double& v : net) v -= c_min;
  std::stable_sort(net.begin(), net.end(), std::greater<>());
  double budget = total_target(phi);
  double total = 0.0;
  for (double v : net) {
    if (v <= 0.0 || budget <= 0.0) break;
    const double p = std::min(1.0, budget);
    total += v * p;
    budget -= p;
  }
  return total;
}

struct CostRealization {
  Matrix costs;
  double probability = 0.0;
};

inline constexpr std::size_t kExactOracleMaxVariables = 200000;

// Exact S* over a finite cost support, as the LP over per-realization
// randomized matchings. Matchings containing a non-positive edge are
// dominated (dropping the edge raises welfare and lowers utilization) and are
// left out.
inline double s_star_exact(std::span<const double> mean_rewards,
                           std::span<const CostRealization> support,
                           std::span<const double> phi) {
  const std::size_t num_arms = mean_rewards.size();
  const std::size_t num_agents = phi.size();
  if (support.empty()) throw ValidationError("s_star_exact: empty support");
  double mass = 0.0;
  for (const auto& r : support) {
    require_shape(r.costs, num_agents, num_arms, "support costs");
    if (!(r.probability >= 0.0)) throw ValidationError("negative probability");
    mass += r.probability;
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    throw ValidationError("s_star_exact: probabilities must sum to 1");
  }
  if (count_partial_matchings(num_agents, num_arms) * support.size() >
      static_cast<double>(kExactOracleMaxVariables)) {
    throw InstanceTooLargeError("s_star_exact: support too large");
  }

  struct Column {
    std::size_t realization;
    double welfare;
    std::vector<std::size_t> agents;
  };
  std::vector<Column> columns;
  for (std::size_t j = 0; j < support.size(); ++j) {
    const Matrix& c = support[j].costs;
    std::vector<bool> arm_used(num_arms, false);
    std::vector<std::size_t> agents;
    auto visit = [&](auto&& self, std::size_t n, double welfare) -> void {
      if (n == num_agents) {
        if (!agents.empty()) columns.push_back({j, welfare, agents});
        return;
      }
      self(self, n + 1, welfare);
      for (std::size_t k = 0; k < num_arms; ++k) {
        const double net = mean_rewards[k] - c(n, k);
        if (arm_used[k] || net <= 0.0) continue;
        arm_used[k] = true;
        agents.push_back(n);
        self(self, n + 1, welfare + net);
        agents.pop_back();
        arm_used[k] = false;
      }
    };
    visit(visit, 0, 0.0);
  }
  if (columns.empty()) return 0.0;

  // Rows: one "at most one matching" row per realization, then one
  // utilization row per agent.
  const std::size_t rows = support.size() + num_agents;
  Matrix a(rows, columns.size());
  std::vector<double> b(rows, 0.0), obj(columns.size(), 0.0);
  for (std::size_t j = 0; j < support.size(); ++j) b[j] = 1.0;
  for (std::size_t n = 0; n < num_agents; ++n) b[support.size() + n] = phi[n];
  for (std::size_t v = 0; v < columns.size(); ++v) {
    const Column& col = columns[v];
    const double q = support[col.realization].probability;
    obj[v] = q * col.welfare;
    a(col.realization, v) = 1.0;
    for (std::size_t n : col.agents) a(support.size() + n, v) = q;
  }
  return maximize_lp(obj, a, b).objective;
}

struct SaaResult {
  double estimate = 0.0;        // best dual value (upper bound on the SAA LP)
  double primal_welfare = 0.0;  // ergodic average of primal welfare
  double primal_max_violation = 0.0;  // max_n (avg utilization - phi_n)^+
  double gap = 0.0;             // estimate - primal_welfare
  std::vector<double> lambda;   // multipliers at the best dual iterate
  std::size_t samples = 0;
  std::size_t iterations = 0;
};

struct SaaOptions {
  std::size_t samples = 10000;
  std::size_t iterations = 400;
  double step = 0.5;  // step at iteration i is step / sqrt(i)
};

// Sample-average S* by projected subgradient on the utilization multipliers.
// `sampler(i)` returns the i-th cost draw (agents x arms).
template <class Sampler>
SaaResult s_star_dual_saa(std::span<const double> mean_rewards, Sampler&& sampler,
                          std::span<const double> phi, const SaaOptions& options = {}) {
  if (options.samples < 1) throw ValidationError("s_star_dual_saa: M must be >= 1");
  if (options.iterations < 1) throw ValidationError("s_star_dual_saa: need iterations");
  const std::size_t num_arms = mean_rewards.size();
  const std::size_t num_agents = phi.size();
  const double m = static_cast<double>(options.samples);

  // Net values r_k - c(n,k) per sample.
  std::vector<Matrix> net;
  net.reserve(options.samples);
  for (std::size_t i = 0; i < options.samples; ++i) {
    Matrix c = sampler(i);
    require_shape(c, num_agents, num_arms, "sampled costs");
    for (std::size_t n = 0; n < num_agents; ++n) {
      for (std::size_t k = 0; k < num_arms; ++k) c(n, k) = mean_rewards[k] - c(n, k);
    }
    net.push_back(std::move(c));
  }

  std::vector<std::size_t> agents(num_agents), arms(num_arms);
  std::iota(agents.begin(), agents.end(), 0);
  std::iota(arms.begin(), arms.end(), 0);

  SaaResult out;
  out.samples = options.samples;
  out.iterations = options.iterations;
  out.estimate = std::numeric_limits<double>::infinity();
  std::vector<double> lambda(num_agents, 0.0), usage(num_agents);
  std::vector<double> avg_usage(num_agents, 0.0);
  double avg_welfare = 0.0;
  Matrix w(num_agents, num_arms);

  for (std::size_t it = 1; it <= options.iterations; ++it) {
    std::fill(usage.begin(), usage.end(), 0.0);
    double value = 0.0;
    double welfare = 0.0;
    for (const Matrix& v : net) {
      for (std::size_t n = 0; n < num_agents; ++n) {
        for (std::size_t k = 0; k < num_arms; ++k) w(n, k) = v(n, k) - lambda[n];
      }
      const detail::PositiveSolve s = detail::solve_positive(w, agents, arms);
      value += s.value;
      for (std::size_t n = 0; n < num_agents; ++n) {
        if (s.arm_of[n] == Assignment::kNone) continue;
        usage[n] += 1.0;
        welfare += v(n, static_cast<std::size_t>(s.arm_of[n]));
      }
    }
    double dual = value / m;
    for (std::size_t n = 0; n < num_agents; ++n) dual += lambda[n] * phi[n];
    if (dual < out.estimate) {
      out.estimate = dual;
      out.lambda = lambda;
    }
    const double weight = 1.0 / static_cast<double>(it);
    avg_welfare += weight * (welfare / m - avg_welfare);
    const double s = options.step / std::sqrt(static_cast<double>(it));
    for (std::size_t n = 0; n < num_agents; ++n) {
      const double used = usage[n] / m;
      avg_usage[n] += weight * (used - avg_usage[n]);
      lambda[n] = std::max(0.0, lambda[n] - s * (phi[n] - used));
    }
  }
  out.primal_welfare = avg_welfare;
  for (std::size_t n = 0; n < num_agents; ++n) {
    out.primal_max_violation = std::max(out.primal_max_violation, avg_usage[n] - phi[n]);
  }
  out.gap = out.estimate - out.primal_welfare;
  return out;
}

struct BaselineValues {
  double s_star = 0.0;
  double s_dagger = 0.0;
  std::string s_star_method;  // "exact-finite-support" or "dual-saa(M=...)"
};

struct MetricLedger {
  double cum_welfare = 0.0;
  double cum_reward = 0.0;
  double cum_cost = 0.0;
  double cum_payment = 0.0;
  std::vector<std::int64_t> utilization;  // per agent
  std::int64_t slots = 0;

  MetricLedger() = default;
  explicit MetricLedger(std::size_t num_agents) : utilization(num_agents, 0) {}

  // Total agent payoff: payments received minus costs incurred.
  double cum_agent_payoff() const { return cum_payment - cum_cost; }
};

inline void record_slot(MetricLedger& ledger, const SlotRecord& rec) {
  require_size(rec.utilization.size(), ledger.utilization.size(), "utilization");
  ledger.cum_reward += rec.reward;
  ledger.cum_cost += rec.cost;
  ledger.cum_welfare += rec.welfare;
  ledger.cum_payment += rec.payment;
  for (std::size_t n = 0; n < rec.utilization.size(); ++n) {
    ledger.utilization[n] += rec.utilization[n] > 0.0 ? 1 : 0;
  }
  ledger.slots += 1;
}

struct Metrics {
  double reg = 0.0;
  double vio = 0.0;
  double pro = 0.0;
  double deg = 0.0;
};

// Per-agent violation is clipped once over the whole horizon, not per slot.
inline double fairness_violation(std::span<const std::int64_t> utilization,
                                 std::span<const double> phi, std::int64_t slots) {
  require_size(utilization.size(), phi.size(), "utilization");
  double vio = 0.0;
  for (std::size_t n = 0; n < phi.size(); ++n) {
    vio += std::max(static_cast<double>(utilization[n]) -
                        phi[n] * static_cast<double>(slots),
                    0.0);
  }
  return vio;
}

inline Metrics finalize_metrics(const MetricLedger& ledger,
                                const std::optional<BaselineValues>& baselines,
                                std::span<const double> phi) {
  if (!baselines) throw ValidationError("finalize_metrics: baselines missing");
  const double t = static_cast<double>(ledger.slots);
  Metrics m;
  m.reg = t * baselines->s_star - ledger.cum_welfare;
  m.vio = fairness_violation(ledger.utilization, phi, ledger.slots);
  m.pro = ledger.cum_reward - ledger.cum_payment;
  m.deg = t * baselines->s_dagger - ledger.cum_welfare;
  return m;
}

// Xi(delta) from the fairness-violation bound.
inline double xi(double delta, std::size_t num_agents, double big_theta, double phi_min) {
  const double root_n = std::sqrt(static_cast<double>(num_agents));
  const double gap = phi_min - delta;
  return 3.0 * root_n * big_theta * big_theta / gap * std::log(2.0 * big_theta / gap) +
         3.0 * root_n * big_theta / (2.0 * delta);
}

inline std::vector<double> delta_grid(double phi_min, std::size_t points = 32) {
  std::vector<double> grid;
  if (!(phi_min > 0.0) || points == 0) return grid;
  const double lo = std::log(1e-3 * phi_min);
  const double hi = std::log(0.999 * phi_min);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    grid.push_back(std::exp(lo + f * (hi - lo)));
  }
  return grid;
}

struct PerformanceBounds {
  double reg_bound = 0.0;  // Reg(T) <= reg_bound
  double vio_bound = 0.0;  // Vio(T) <= vio_bound (tightest over the delta grid)
  double pro_bound = 0.0;  // Pro(T) >= pro_bound
  double best_delta = 0.0;
};

inline PerformanceBounds performance_bounds(std::size_t num_arms, std::int64_t horizon,
                                    std::span<const double> phi, double vio_t) {
  if (horizon < 2) throw ValidationError("performance_bounds: T must be >= 2");
  const double k = static_cast<double>(num_arms);
  const double t = static_cast<double>(horizon);
  const std::size_t num_agents = phi.size();
  const double big_phi = total_target(phi);
  const double big_theta = theta(num_arms, phi);
  const double phi_min = phi.empty() ? 0.0 : *std::min_element(phi.begin(), phi.end());

  const auto grid = delta_grid(phi_min);
  if (grid.empty()) throw ValidationError("performance_bounds: empty delta grid (phi_min <= 0)");

  PerformanceBounds out;
  const double root = std::sqrt(6.0 * k * t * (big_phi + vio_t / t) * std::log(t));
  out.reg_bound = 6.0 * k + 3.0 * root;
  out.pro_bound = -(2.5 * k + 2.0 * root);

  const double tail = big_theta * big_theta / 4.0 *
                      std::sqrt(static_cast<double>(num_agents) * t / (k * big_phi));
  out.vio_bound = std::numeric_limits<double>::infinity();
  for (double d : grid) {
    const double v = xi(d, num_agents, big_theta, phi_min) + tail / d;
    if (v < out.vio_bound) {
      out.vio_bound = v;
      out.best_delta = d;
    }
  }
  return out;
}

}  // namespace iol
