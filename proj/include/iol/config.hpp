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

// Run configuration: a JSON document whose keys mirror RunConfig's fields.
//
//   {
//     "K": 5, "N": 2, "T": 20000, "R": 20, "seed": 1,
//     "arms": [{"distribution": "bernoulli", "mean": 0.9},
//              {"distribution": "uniform", "lo": 0.2, "hi": 0.6}],
//     "cost_model": {"kind": "edge-computing", "c_min": 0.0,
//                    "price_series": "builtin:synthetic",
//                    "energy_mu": 0.05, "energy_sigma": 0.02, "energy_max": 0.1},
//     "phi": [0.7, 0.3],                 // or {"homogeneous": alpha}
//     "eta": "tuned",                 // or a positive number
//     "agent_policies": ["truthful", {"kind": "overbid", "delta": 0.1}],
//     "output_dir": "out/small",
//     "oracle": {"saa_samples": 10000, "saa_iterations": 400, "saa_step": 0.5}
//   }
//
// "agent_policies" may also be a single policy applied to every agent.

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iol/agents.hpp"
#include "iol/common.hpp"
#include "iol/env.hpp"
#include "iol/mechanism.hpp"
#include "iol/oracle.hpp"

namespace iol {

using json = nlohmann::json;

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

inline constexpr const char* kBuiltinPrices = "builtin:synthetic";

struct OracleSettings {
  std::size_t saa_samples = 10000;
  std::size_t saa_iterations = 400;
  double saa_step = 0.5;

  friend bool operator==(const OracleSettings&, const OracleSettings&) = default;
};

struct RunConfig {
  std::size_t K = 0;
  std::size_t N = 0;
  std::int64_t T = 0;
  std::size_t R = 1;
  std::vector<ArmSpec> arms;
  CostModel cost_model;
  std::vector<double> phi;
  std::optional<double> phi_alpha;  // set when phi came from the shorthand
  std::optional<double> eta;        // nullopt: tuned_step_size(K, T, phi)
  std::vector<AgentPolicy> agent_policies;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  OracleSettings oracle;

  void validate() const {
    if (K < 1 || N < 1 || T < 1 || R < 1) throw ConfigError("K, N, T, R must be >= 1");
    if (arms.size() != K) throw ConfigError("arms must list K entries");
    if (phi.size() != N) throw ConfigError("phi must have N entries");
    if (agent_policies.size() != N) throw ConfigError("agent_policies must have N entries");
    for (double p : phi) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("phi entries must lie in [0,1]");
    }
    if (eta && !(*eta > 0.0)) throw ConfigError("eta must be > 0");
    if (!eta && T < 2) throw ConfigError("tuned step size needs T >= 2");
    for (const auto& a : arms) a.validate();
    cost_model.validate();
    if (oracle.saa_samples < 1 || oracle.saa_iterations < 1 || !(oracle.saa_step > 0.0)) {
      throw ConfigError("invalid oracle settings");
    }
  }

  double resolved_eta() const {
    return eta ? *eta : tuned_step_size(K, T, phi);
  }

  std::vector<double> mean_rewards() const {
    std::vector<double> r;
    for (const auto& a : arms) r.push_back(a.mean_reward);
    return r;
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// phi_n = alpha / N, capped at 1.
inline std::vector<double> homogeneous_phi(double alpha, std::size_t num_agents) {
  if (!(alpha > 0.0)) throw ConfigError("homogeneous alpha must be > 0");
  return std::vector<double>(num_agents,
                             std::min(alpha / static_cast<double>(num_agents), 1.0));
}

inline std::shared_ptr<const PriceSeries> resolve_prices(
    const std::string& id, const std::filesystem::path& base_dir) {
  if (id == kBuiltinPrices) {
    return std::make_shared<const PriceSeries>(synthetic_price_series());
  }
  std::filesystem::path p(id);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open price series '" + p.string() + "'");
  return std::make_shared<const PriceSeries>(load_price_series(in));
}

namespace detail {

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config: missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

template <class T>
T optional_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? required<T>(j, key) : fallback;
}

inline ArmSpec parse_arm(const json& j) {
  const auto dist = required<std::string>(j, "distribution");
  if (dist == "bernoulli") return ArmSpec::bernoulli(required<double>(j, "mean"));
  if (dist == "uniform") {
    return ArmSpec::uniform(required<double>(j, "lo"), required<double>(j, "hi"));
  }
  throw ConfigError("config: unknown arm distribution '" + dist + "'");
}

inline json arm_to_json(const ArmSpec& a) {
  if (a.kind == ArmSpec::Kind::kBernoulli) {
    return {{"distribution", "bernoulli"}, {"mean", a.mean_reward}};
  }
  return {{"distribution", "uniform"}, {"lo", a.lo}, {"hi", a.hi}};
}

inline AgentPolicy parse_policy(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "truthful") return AgentPolicy::truthful();
    throw ConfigError("config: policy '" + s + "' needs parameters");
  }
  const auto kind = required<std::string>(j, "kind");
  if (kind == "truthful") return AgentPolicy::truthful();
  if (kind == "overbid") return AgentPolicy::overbid(required<double>(j, "delta"));
  if (kind == "underbid") return AgentPolicy::underbid(required<double>(j, "delta"));
  if (kind == "random-misreport") {
    return AgentPolicy::random_misreport(required<std::uint64_t>(j, "seed"),
                                         optional_or<double>(j, "delta", 0.2));
  }
  throw ConfigError("config: unknown agent policy '" + kind + "'");
}

inline json policy_to_json(const AgentPolicy& p) {
  switch (p.kind) {
    case AgentPolicy::Kind::kTruthful: return "truthful";
    case AgentPolicy::Kind::kOverbid: return {{"kind", "overbid"}, {"delta", p.delta}};
    case AgentPolicy::Kind::kUnderbid: return {{"kind", "underbid"}, {"delta", p.delta}};
    case AgentPolicy::Kind::kRandomMisreport:
      return {{"kind", "random-misreport"}, {"seed", p.seed}, {"delta", p.delta}};
  }
  return "truthful";
}

inline CostModel parse_cost_model(const json& j, const std::filesystem::path& base_dir) {
  CostModel m;
  const auto kind = required<std::string>(j, "kind");
  m.c_min = optional_or<double>(j, "c_min", 0.0);
  if (kind == "iid-truncated-normal") {
    m.kind = CostModel::Kind::kTruncatedNormal;
    m.mu = required<double>(j, "mu");
    m.sigma = required<double>(j, "sigma");
  } else if (kind == "edge-computing") {
    m.kind = CostModel::Kind::kEdgeComputing;
    m.price_series_id = optional_or<std::string>(j, "price_series", kBuiltinPrices);
    m.energy_mu = optional_or<double>(j, "energy_mu", 0.05);
    m.energy_sigma = optional_or<double>(j, "energy_sigma", 0.02);
    m.energy_max = optional_or<double>(j, "energy_max", 0.1);
    m.prices = resolve_prices(m.price_series_id, base_dir);
  } else {
    throw ConfigError("config: unknown cost model '" + kind + "'");
  }
  return m;
}

inline json cost_model_to_json(const CostModel& m) {
  if (m.kind == CostModel::Kind::kTruncatedNormal) {
    return {{"kind", "iid-truncated-normal"}, {"c_min", m.c_min},
            {"mu", m.mu}, {"sigma", m.sigma}};
  }
  return {{"kind", "edge-computing"},     {"c_min", m.c_min},
          {"price_series", m.price_series_id}, {"energy_mu", m.energy_mu},
          {"energy_sigma", m.energy_sigma},    {"energy_max", m.energy_max}};
}

}  // namespace detail

// `base_dir` resolves relative price-series paths.
inline RunConfig parse_config(const json& j, const std::filesystem::path& base_dir = {}) {
  using detail::optional_or;
  using detail::required;
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig c;
  c.K = required<std::size_t>(j, "K");
  c.N = required<std::size_t>(j, "N");
  c.T = required<std::int64_t>(j, "T");
  c.R = optional_or<std::size_t>(j, "R", 1);
  c.seed = optional_or<std::uint64_t>(j, "seed", 1);
  c.output_dir = optional_or<std::string>(j, "output_dir", "out");

  if (!j.contains("arms") || !j.at("arms").is_array()) {
    throw ConfigError("config: 'arms' must be an array");
  }
  for (const auto& a : j.at("arms")) c.arms.push_back(detail::parse_arm(a));

  if (!j.contains("cost_model")) throw ConfigError("config: missing key 'cost_model'");
  c.cost_model = detail::parse_cost_model(j.at("cost_model"), base_dir);

  if (!j.contains("phi")) throw ConfigError("config: missing key 'phi'");
  const json& phi = j.at("phi");
  if (phi.is_object()) {
    c.phi_alpha = required<double>(phi, "homogeneous");
    c.phi = homogeneous_phi(*c.phi_alpha, c.N);
  } else {
    c.phi = required<std::vector<double>>(j, "phi");
  }

  if (j.contains("eta")) {
    const json& e = j.at("eta");
    if (e.is_string()) {
      if (e.get<std::string>() != "tuned") throw ConfigError("config: eta must be 'tuned' or a number");
    } else {
      c.eta = required<double>(j, "eta");
    }
  }

  if (j.contains("agent_policies")) {
    const json& p = j.at("agent_policies");
    if (p.is_array()) {
      for (const auto& e : p) c.agent_policies.push_back(detail::parse_policy(e));
    } else {
      c.agent_policies.assign(c.N, detail::parse_policy(p));
    }
  } else {
    c.agent_policies.assign(c.N, AgentPolicy::truthful());
  }

  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    c.oracle.saa_samples = optional_or<std::size_t>(o, "saa_samples", c.oracle.saa_samples);
    c.oracle.saa_iterations =
        optional_or<std::size_t>(o, "saa_iterations", c.oracle.saa_iterations);
    c.oracle.saa_step = optional_or<double>(o, "saa_step", c.oracle.saa_step);
  }
  c.validate();
  return c;
}

inline RunConfig parse_config_text(const std::string& text,
                                   const std::filesystem::path& base_dir = {}) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config(j, base_dir);
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path());
}

inline json to_json(const RunConfig& c) {
  json j;
  j["K"] = c.K;
  j["N"] = c.N;
  j["T"] = c.T;
  j["R"] = c.R;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["arms"] = json::array();
  for (const auto& a : c.arms) j["arms"].push_back(detail::arm_to_json(a));
  j["cost_model"] = detail::cost_model_to_json(c.cost_model);
  if (c.phi_alpha) {
    j["phi"] = {{"homogeneous", *c.phi_alpha}};
  } else {
    j["phi"] = c.phi;
  }
  if (c.eta) {
    j["eta"] = *c.eta;
  } else {
    j["eta"] = "tuned";
  }
  j["agent_policies"] = json::array();
  for (const auto& p : c.agent_policies) j["agent_policies"].push_back(detail::policy_to_json(p));
  j["oracle"] = {{"saa_samples", c.oracle.saa_samples},
                 {"saa_iterations", c.oracle.saa_iterations},
                 {"saa_step", c.oracle.saa_step}};
  return j;
}

inline std::string serialize_config(const RunConfig& c) { return to_json(c).dump(2); }

// FNV-1a over the canonical JSON text.
inline std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(c).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::vector<ArmSpec> reference_arms() {
  std::vector<ArmSpec> arms;
  for (double m : {0.1, 0.3, 0.5, 0.7, 0.9}) arms.push_back(ArmSpec::bernoulli(m));
  return arms;
}

// Two edge servers, five devices, utilization caps 0.7 / 0.3, edge-computing
// costs over the bundled synthetic price trace. T = 2e4 and R = 20 are
// defaults chosen here; energy N(0.05, 0.02) truncated to [0, 0.1].
inline RunConfig preset_small_scale(std::int64_t T = 20000, std::size_t R = 20,
                                    std::uint64_t seed = 1) {
  RunConfig c;
  c.K = 5;
  c.N = 2;
  c.T = T;
  c.R = R;
  c.seed = seed;
  c.arms = reference_arms();
  c.cost_model.kind = CostModel::Kind::kEdgeComputing;
  c.cost_model.c_min = 0.0;
  c.cost_model.price_series_id = kBuiltinPrices;
  c.cost_model.prices = resolve_prices(kBuiltinPrices, {});
  c.cost_model.energy_mu = 0.05;
  c.cost_model.energy_sigma = 0.02;
  c.cost_model.energy_max = 0.1;
  c.phi = {0.7, 0.3};
  c.agent_policies.assign(c.N, AgentPolicy::truthful());
  c.output_dir = "out/small";
  c.validate();
  return c;
}

// Largest crowd for the large-scale regime, floor(alpha^(1/3) T^beta). The
// epsilon absorbs pow() rounding at exact integers (1e5^0.2 == 10).
inline std::size_t large_scale_max_agents(double alpha, double beta, std::int64_t T) {
  if (!(beta > 0.0 && beta < 1.0 / 3.0)) throw ConfigError("beta must lie in (0, 1/3)");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
  const double n = std::cbrt(alpha) * std::pow(static_cast<double>(T), beta);
  return static_cast<std::size_t>(std::floor(n + 1e-9));
}

// Homogeneous systems with N = 1..N_max agents, phi_n = alpha/N and IID
// truncated-normal costs N(0.2, 0.1) on [0, 1].
inline std::vector<RunConfig> preset_large_scale(double alpha = 1.0, double beta = 0.2,
                                                 std::int64_t T = 100000,
                                                 std::size_t R = 20,
                                                 std::uint64_t seed = 1) {
  const std::size_t n_max = large_scale_max_agents(alpha, beta, T);
  std::vector<RunConfig> out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    RunConfig c;
    c.K = 5;
    c.N = n;
    c.T = T;
    c.R = R;
    c.seed = seed;
    c.arms = reference_arms();
    c.cost_model.kind = CostModel::Kind::kTruncatedNormal;
    c.cost_model.c_min = 0.0;
    c.cost_model.mu = 0.2;
    c.cost_model.sigma = 0.1;
    c.phi_alpha = alpha;
    c.phi = homogeneous_phi(alpha, n);
    c.agent_policies.assign(n, AgentPolicy::truthful());
    c.output_dir = "out/large/N" + std::to_string(n);
    c.oracle.saa_samples = 2000;
    c.oracle.saa_iterations = 200;
    c.validate();
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace iol
