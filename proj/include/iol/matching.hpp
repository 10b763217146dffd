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

// Maximum-weight partial bipartite matching between agents (rows) and arms
// (columns) with unit capacities on both sides.
//
// Only strictly positive edges are ever selected. Among optimal matchings the
// solver returns the one whose edge list, sorted by (agent, arm), is
// lexicographically smallest. The Hungarian method provides the optimum value
// and an optimal dual; the dual restricts the tie-break search to tight edges,
// so the common no-tie case costs a single solve.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "iol/common.hpp"

namespace iol {

// A partial matching stored as agent -> arm. Rows have at most one edge by
// construction; column uniqueness is checked by is_feasible().
class Assignment {
 public:
  static constexpr int kNone = -1;

  Assignment() = default;
  Assignment(std::size_t num_agents, std::size_t num_arms)
      : num_arms_(num_arms), arm_of_(num_agents, kNone) {}

  std::size_t num_agents() const { return arm_of_.size(); }
  std::size_t num_arms() const { return num_arms_; }

  int arm_of(std::size_t agent) const { return arm_of_[agent]; }
  bool is_assigned(std::size_t agent) const { return arm_of_[agent] != kNone; }
  bool x(std::size_t agent, std::size_t arm) const {
    return arm_of_[agent] == static_cast<int>(arm);
  }

  void assign(std::size_t agent, std::size_t arm) {
    arm_of_[agent] = static_cast<int>(arm);
  }
  void unassign(std::size_t agent) { arm_of_[agent] = kNone; }

  std::size_t size() const {
    std::size_t n = 0;
    for (int a : arm_of_) n += a != kNone;
    return n;
  }
  bool empty() const { return size() == 0; }

  // Every row and every column carries at most one edge.
  bool is_feasible() const {
    std::vector<bool> taken(num_arms_, false);
    for (int a : arm_of_) {
      if (a == kNone) continue;
      if (a < 0 || static_cast<std::size_t>(a) >= num_arms_ || taken[a]) return false;
      taken[a] = true;
    }
    return true;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t n = 0; n < arm_of_.size(); ++n) {
      if (arm_of_[n] != kNone) out.emplace_back(n, static_cast<std::size_t>(arm_of_[n]));
    }
    return out;
  }

  // Sum of w over selected edges, accumulated in agent order.
  double weight(const Matrix& w) const {
    double total = 0.0;
    for (std::size_t n = 0; n < arm_of_.size(); ++n) {
      if (arm_of_[n] != kNone) total += w(n, static_cast<std::size_t>(arm_of_[n]));
    }
    return total;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& [n, k] : edges()) {
      if (!s.empty()) s += ';';
      s += std::to_string(n + 1) + ":" + std::to_string(k + 1);
    }
    return s;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::size_t num_arms_ = 0;
  std::vector<int> arm_of_;
};

struct MatchingResult {
  Assignment assignment;
  double total_weight = 0.0;
};

namespace detail {

inline void require_finite(const Matrix& w) {
  for (double v : w.values()) {
    if (!std::isfinite(v)) throw ValidationError("matching weights must be finite");
  }
}

// Rectangular min-cost assignment (rows <= cols), every row matched. Returns
// row -> column and potentials with u[i] + v[j] <= cost(i,j), tight on the
// matching, v[j] == 0 on unmatched columns.
struct HungarianSolution {
  std::vector<int> col_of_row;
  std::vector<double> u;
  std::vector<double> v;
};

inline HungarianSolution hungarian(const Matrix& cost) {
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  HungarianSolution out;
  out.col_of_row.assign(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) out.col_of_row[p[j] - 1] = static_cast<int>(j - 1);
  }
  out.u.assign(u.begin() + 1, u.end());
  out.v.assign(v.begin() + 1, v.end());
  return out;
}

// Optimal positive-edge matching on the sub-problem induced by the given
// agent and arm index lists (both increasing). arm_of is indexed by global
// agent id; only entries for `agents` are written.
struct PositiveSolve {
  double value = 0.0;
  std::vector<int> arm_of;
  // Potentials by global index; reduced cost of (n,k) is
  // -max(w,0) - agent_pot[n] - arm_pot[k] >= 0.
  std::vector<double> agent_pot;
  std::vector<double> arm_pot;
};

inline PositiveSolve solve_positive(const Matrix& w,
                                    const std::vector<std::size_t>& agents,
                                    const std::vector<std::size_t>& arms) {
  PositiveSolve out;
  out.arm_of.assign(w.rows(), Assignment::kNone);
  out.agent_pot.assign(w.rows(), 0.0);
  out.arm_pot.assign(w.cols(), 0.0);
  if (agents.empty() || arms.empty()) return out;

  const bool agents_are_rows = agents.size() <= arms.size();
  const std::size_t nr = agents_are_rows ? agents.size() : arms.size();
  const std::size_t nc = agents_are_rows ? arms.size() : agents.size();
  Matrix cost(nr, nc);
  for (std::size_t a = 0; a < agents.size(); ++a) {
    for (std::size_t b = 0; b < arms.size(); ++b) {
      const double c = -std::max(w(agents[a], arms[b]), 0.0);
      if (agents_are_rows) {
        cost(a, b) = c;
      } else {
        cost(b, a) = c;
      }
    }
  }
  const HungarianSolution h = hungarian(cost);
  for (std::size_t r = 0; r < nr; ++r) {
    const std::size_t c = static_cast<std::size_t>(h.col_of_row[r]);
    const std::size_t agent = agents_are_rows ? agents[r] : agents[c];
    const std::size_t arm = agents_are_rows ? arms[c] : arms[r];
    if (w(agent, arm) > 0.0) out.arm_of[agent] = static_cast<int>(arm);
  }
  for (std::size_t a = 0; a < agents.size(); ++a) {
    out.agent_pot[agents[a]] = agents_are_rows ? h.u[a] : h.v[a];
  }
  for (std::size_t b = 0; b < arms.size(); ++b) {
    out.arm_pot[arms[b]] = agents_are_rows ? h.v[b] : h.u[b];
  }
  for (std::size_t agent : agents) {
    if (out.arm_of[agent] != Assignment::kNone) {
      out.value += w(agent, static_cast<std::size_t>(out.arm_of[agent]));
    }
  }
  return out;
}

inline double tie_tolerance(double value) {
  return 1e-12 * (1.0 + std::abs(value));
}

}  // namespace detail

// Optimal value only, without the lexicographic tie-break. The value is the
// sum of the selected weights in agent order.
inline double max_weight_value(const Matrix& w) {
  detail::require_finite(w);
  std::vector<std::size_t> agents(w.rows()), arms(w.cols());
  std::iota(agents.begin(), agents.end(), 0);
  std::iota(arms.begin(), arms.end(), 0);
  return detail::solve_positive(w, agents, arms).value;
}

inline MatchingResult max_weight_matching(const Matrix& w) {
  detail::require_finite(w);
  const std::size_t num_agents = w.rows();
  const std::size_t num_arms = w.cols();
  std::vector<std::size_t> agents(num_agents), arms(num_arms);
  std::iota(agents.begin(), agents.end(), 0);
  std::iota(arms.begin(), arms.end(), 0);

  const detail::PositiveSolve full = detail::solve_positive(w, agents, arms);
  const double optimum = full.value;
  const double tol = detail::tie_tolerance(optimum);
  constexpr double kTight = 1e-9;

  // `ref` is always an optimal matching agreeing with every decision fixed so
  // far; decisions for agent n only need to look at arms below ref[n].
  std::vector<int> ref = full.arm_of;
  std::vector<bool> arm_used(num_arms, false);
  Assignment out(num_agents, num_arms);
  double fixed = 0.0;

  for (std::size_t n = 0; n < num_agents; ++n) {
    int chosen = Assignment::kNone;
    for (std::size_t k = 0; k < num_arms; ++k) {
      if (arm_used[k] || w(n, k) <= 0.0) continue;
      if (static_cast<int>(k) == ref[n]) {
        chosen = ref[n];
        break;
      }
      if (ref[n] != Assignment::kNone && static_cast<int>(k) > ref[n]) break;
      const double reduced = -w(n, k) - full.agent_pot[n] - full.arm_pot[k];
      if (reduced > kTight) continue;  // not in any optimal matching

      std::vector<std::size_t> rest_agents, rest_arms;
      for (std::size_t i = n + 1; i < num_agents; ++i) rest_agents.push_back(i);
      for (std::size_t j = 0; j < num_arms; ++j) {
        if (!arm_used[j] && j != k) rest_arms.push_back(j);
      }
      const detail::PositiveSolve rest =
          detail::solve_positive(w, rest_agents, rest_arms);
      if (fixed + w(n, k) + rest.value >= optimum - tol) {
        chosen = static_cast<int>(k);
        for (std::size_t i = n + 1; i < num_agents; ++i) ref[i] = rest.arm_of[i];
        break;
      }
    }
    if (chosen != Assignment::kNone) {
      out.assign(n, static_cast<std::size_t>(chosen));
      arm_used[static_cast<std::size_t>(chosen)] = true;
      fixed += w(n, static_cast<std::size_t>(chosen));
    }
  }
  return {out, out.weight(w)};
}

// Number of partial matchings of the complete N x K bipartite graph.
inline double count_partial_matchings(std::size_t num_agents, std::size_t num_arms) {
  const std::size_t m = std::min(num_agents, num_arms);
  double total = 0.0;
  for (std::size_t j = 0; j <= m; ++j) {
    // C(N,j) * C(K,j) * j!  ==  C(N,j) * K!/(K-j)!
    double term = 1.0;
    for (std::size_t i = 0; i < j; ++i) {
      term *= static_cast<double>(num_agents - i) / static_cast<double>(i + 1);
      term *= static_cast<double>(num_arms - i);
    }
    total += term;
  }
  return total;
}

inline constexpr double kBruteForceLimit = 1e6;

class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration; the test oracle for max_weight_matching.
inline MatchingResult brute_force_matching(const Matrix& w) {
  detail::require_finite(w);
  const std::size_t num_agents = w.rows();
  const std::size_t num_arms = w.cols();
  if (count_partial_matchings(num_agents, num_arms) > kBruteForceLimit) {
    throw InstanceTooLargeError("brute_force_matching: more than 1e6 matchings");
  }

  Assignment current(num_agents, num_arms);
  Assignment best(num_agents, num_arms);
  double best_value = 0.0;
  std::vector<bool> arm_used(num_arms, false);

  auto lex_less = [](const Assignment& a, const Assignment& b) {
    const auto ea = a.edges();
    const auto eb = b.edges();
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
  };

  auto visit = [&](auto&& self, std::size_t n, double value) -> void {
    if (n == num_agents) {
      const double tol = detail::tie_tolerance(best_value);
      if (value > best_value + tol ||
          (value >= best_value - tol && lex_less(current, best))) {
        best = current;
        best_value = value;
      }
      return;
    }
    for (std::size_t k = 0; k < num_arms; ++k) {
      if (arm_used[k] || w(n, k) <= 0.0) continue;
      arm_used[k] = true;
      current.assign(n, k);
      self(self, n + 1, value + w(n, k));
      current.unassign(n);
      arm_used[k] = false;
    }
    self(self, n + 1, value);
  };
  visit(visit, 0, 0.0);
  return {best, best.weight(w)};
}

}  // namespace iol
