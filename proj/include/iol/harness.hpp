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

// Experiment driver: R seeded runs of T slots, baselines, bound evaluation,
// and the on-disk artifacts
//
//   slots.csv      one row per (run, slot)
//   summary.csv    one row per run, then "mean" and "std" rows
//   aggregate.csv  per-slot time averages across runs: mean and mean +/- 3 sd
//   metadata.json  config, config hash, baselines and oracle method
//
// Run r uses seed (config.seed + r). Everything except metadata's wall time
// is a deterministic function of the config.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <span>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "iol/agents.hpp"
#include "iol/common.hpp"
#include "iol/config.hpp"
#include "iol/env.hpp"
#include "iol/mechanism.hpp"
#include "iol/oracle.hpp"

namespace iol {

class ReplayMismatchError : public Error {
 public:
  using Error::Error;
};

class MissingArtifactError : public Error {
 public:
  using Error::Error;
};

// One seeded run, advanced slot by slot.
class RunSimulator {
 public:
  RunSimulator(const RunConfig& config, std::size_t run_index)
      : config_(config),
        run_index_(run_index),
        env_(config.arms, config.cost_model, config.N, config.seed + run_index),
        state_(config.K, config.phi, config.resolved_eta(), config.T),
        ledger_(config.N),
        policies_(config.agent_policies) {
    for (auto& p : policies_) p.seed = mix_seed(p.seed, config.seed + run_index);
  }

  bool done() const { return state_.slot > config_.T; }
  std::int64_t next_slot() const { return state_.slot; }
  const MechanismState& state() const { return state_; }
  const MetricLedger& ledger() const { return ledger_; }
  std::size_t run_index() const { return run_index_; }

  SlotRecord next() {
    const EnvRealization real = env_.sample_slot(state_.slot);
    const BidMatrix bids =
        form_bids(policies_, real.costs, config_.cost_model.c_min, state_.slot);
    const DecisionFn decide = [&real](const Proposal& p) {
      return decide_participation(p, real.costs).a;
    };
    SlotRecord rec = step(state_, bids, real, decide).record;
    record_slot(ledger_, rec);
    return rec;
  }

 private:
  const RunConfig& config_;
  std::size_t run_index_;
  Environment env_;
  MechanismState state_;
  MetricLedger ledger_;
  std::vector<AgentPolicy> policies_;
};

inline std::string slot_csv_header(std::size_t num_arms, std::size_t num_agents) {
  std::string h = "run,slot";
  for (std::size_t k = 1; k <= num_arms; ++k) h += ",rhat_" + std::to_string(k);
  h += ",assignment";
  for (std::size_t n = 1; n <= num_agents; ++n) h += ",pay_" + std::to_string(n);
  for (std::size_t n = 1; n <= num_agents; ++n) h += ",lambda_" + std::to_string(n);
  h += ",reward,cost,welfare,profit";
  return h;
}

// `assignment` lists agent:arm pairs (1-based) separated by ';'.
inline std::string format_slot_row(std::size_t run, const SlotRecord& rec) {
  std::string row = std::to_string(run) + "," + std::to_string(rec.slot);
  for (double r : rec.reward_estimates) row += "," + format_double(r);
  row += "," + rec.assignment.to_string();
  for (double y : rec.payments) row += "," + format_double(y);
  for (double l : rec.lambda) row += "," + format_double(l);
  row += "," + format_double(rec.reward) + "," + format_double(rec.cost) + "," +
         format_double(rec.welfare) + "," + format_double(rec.profit);
  return row;
}

struct RunSummary {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  MetricLedger ledger;
  Metrics metrics;
  double min_payoff = 0.0;          // smallest per-agent per-slot payoff seen
  std::int64_t declined = 0;        // agent-slots with a_n = 0
  bool payments_nonnegative = true; // under the computed payments
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

inline MeanStd mean_std(std::span<const double> xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

struct RunOptions {
  bool write_files = true;
  bool write_slots = true;
  bool write_aggregate = true;
  bool compute_s_star = true;
  std::size_t threads = 1;
  std::optional<std::string> output_dir;  // overrides config.output_dir
};

struct RunOutput {
  RunConfig config;
  BaselineValues baselines;
  SaaResult saa;
  std::vector<RunSummary> runs;
  PerformanceBounds bounds;  // evaluated at the mean Vio(T)
  double eta = 0.0;
  double wall_time_s = 0.0;
  std::filesystem::path output_dir;

  // Per-run value of a summary field, in run order.
  std::vector<double> column(const std::function<double(const RunSummary&)>& f) const {
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(f(r));
    return v;
  }
  MeanStd stat(const std::function<double(const RunSummary&)>& f) const {
    const auto v = column(f);
    return mean_std(v);
  }
};

inline BaselineValues compute_baselines(const RunConfig& config, SaaResult* saa_out = nullptr,
                                        bool compute_s_star = true) {
  BaselineValues b;
  const auto r_bar = config.mean_rewards();
  b.s_dagger = s_dagger(r_bar, config.cost_model.c_min, config.phi);
  if (!compute_s_star) {
    b.s_star = std::nan("");
    b.s_star_method = "skipped";
    return b;
  }
  const Environment env(config.arms, config.cost_model, config.N, config.seed);
  SaaOptions opts;
  opts.samples = config.oracle.saa_samples;
  opts.iterations = config.oracle.saa_iterations;
  opts.step = config.oracle.saa_step;
  const SaaResult saa = s_star_dual_saa(
      r_bar, [&env](std::size_t i) { return env.sample_oracle_costs(i); }, config.phi, opts);
  b.s_star = saa.estimate;
  b.s_star_method = "dual-saa(M=" + std::to_string(opts.samples) + ")";
  if (saa_out) *saa_out = saa;
  return b;
}

namespace detail {

// Per-slot series of one run, for the cross-run aggregate.
struct SlotSeries {
  std::vector<double> reward, cost, welfare, profit, payoff;
};

struct RunArtifacts {
  RunSummary summary;
  std::string rows;
  SlotSeries series;
};

inline RunArtifacts simulate(const RunConfig& config, std::size_t run,
                             const BaselineValues& baselines, bool keep_rows,
                             bool keep_series) {
  RunArtifacts out;
  RunSimulator sim(config, run);
  out.summary.run = run;
  out.summary.seed = config.seed + run;
  out.summary.min_payoff = std::numeric_limits<double>::infinity();
  double reward = 0.0, cost = 0.0, profit = 0.0, payment = 0.0;
  if (keep_series) {
    for (auto* v : {&out.series.reward, &out.series.cost, &out.series.welfare,
                    &out.series.profit, &out.series.payoff}) {
      v->reserve(static_cast<std::size_t>(config.T));
    }
  }
  while (!sim.done()) {
    const SlotRecord rec = sim.next();
    for (std::size_t n = 0; n < config.N; ++n) {
      if (rec.participation[n] == 0) {
        out.summary.declined += 1;
        continue;
      }
      out.summary.min_payoff = std::min(out.summary.min_payoff, rec.payoffs[n]);
      if (rec.payments[n] < -kInvariantTolerance) out.summary.payments_nonnegative = false;
    }
    if (keep_rows) {
      out.rows += format_slot_row(run, rec);
      out.rows += '\n';
    }
    if (keep_series) {
      reward += rec.reward;
      cost += rec.cost;
      profit += rec.profit;
      payment += rec.payment;
      const double t = static_cast<double>(rec.slot);
      out.series.reward.push_back(reward / t);
      out.series.cost.push_back(cost / t);
      out.series.welfare.push_back((reward - cost) / t);
      out.series.profit.push_back(profit / t);
      out.series.payoff.push_back((payment - cost) / (t * static_cast<double>(config.N)));
    }
  }
  out.summary.ledger = sim.ledger();
  out.summary.metrics = finalize_metrics(out.summary.ledger, baselines, config.phi);
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("missing artifact '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline std::string summary_csv_header(std::size_t num_agents) {
  std::string h =
      "run,seed,T,reg,vio,pro,deg,cum_reward,cum_cost,cum_welfare,cum_payment,agent_payoff";
  for (std::size_t n = 1; n <= num_agents; ++n) h += ",util_" + std::to_string(n);
  return h;
}

inline std::string format_summary_row(const RunSummary& s) {
  const auto& l = s.ledger;
  const auto& m = s.metrics;
  std::string row = std::to_string(s.run) + "," + std::to_string(s.seed) + "," +
                    std::to_string(l.slots);
  for (double v : {m.reg, m.vio, m.pro, m.deg, l.cum_reward, l.cum_cost, l.cum_welfare,
                   l.cum_payment, l.cum_agent_payoff()}) {
    row += "," + format_double(v);
  }
  for (auto u : l.utilization) row += "," + std::to_string(u);
  return row;
}

inline std::string summary_csv(const RunOutput& out) {
  std::string text = summary_csv_header(out.config.N) + "\n";
  for (const auto& r : out.runs) text += format_summary_row(r) + "\n";
  using F = std::function<double(const RunSummary&)>;
  const std::vector<F> fields = {
      [](const RunSummary& r) { return r.metrics.reg; },
      [](const RunSummary& r) { return r.metrics.vio; },
      [](const RunSummary& r) { return r.metrics.pro; },
      [](const RunSummary& r) { return r.metrics.deg; },
      [](const RunSummary& r) { return r.ledger.cum_reward; },
      [](const RunSummary& r) { return r.ledger.cum_cost; },
      [](const RunSummary& r) { return r.ledger.cum_welfare; },
      [](const RunSummary& r) { return r.ledger.cum_payment; },
      [](const RunSummary& r) { return r.ledger.cum_agent_payoff(); },
  };
  std::string mean_row = "mean,,", std_row = "std,,";
  mean_row += std::to_string(out.config.T);
  std_row += std::to_string(out.config.T);
  for (const auto& f : fields) {
    const MeanStd ms = out.stat(f);
    mean_row += "," + format_double(ms.mean);
    std_row += "," + format_double(ms.std);
  }
  for (std::size_t n = 0; n < out.config.N; ++n) {
    const MeanStd ms = out.stat([n](const RunSummary& r) {
      return static_cast<double>(r.ledger.utilization[n]);
    });
    mean_row += "," + format_double(ms.mean);
    std_row += "," + format_double(ms.std);
  }
  return text + mean_row + "\n" + std_row + "\n";
}

inline std::string aggregate_csv(const RunConfig& config,
                                 const std::vector<detail::SlotSeries>& series) {
  const double best_arm =
      config.arms.empty()
          ? 0.0
          : std::max_element(config.arms.begin(), config.arms.end(),
                             [](const ArmSpec& a, const ArmSpec& b) {
                               return a.mean_reward < b.mean_reward;
                             })->mean_reward;
  std::string text = "slot";
  for (const char* name : {"reward", "cost", "welfare", "profit", "agent_payoff"}) {
    text += std::string(",") + name + "_mean," + name + "_lo3," + name + "_hi3";
  }
  text += ",best_arm_mean\n";
  std::vector<double> buf(series.size());
  for (std::size_t t = 0; t < static_cast<std::size_t>(config.T); ++t) {
    text += std::to_string(t + 1);
    for (auto member : {&detail::SlotSeries::reward, &detail::SlotSeries::cost,
                        &detail::SlotSeries::welfare, &detail::SlotSeries::profit,
                        &detail::SlotSeries::payoff}) {
      for (std::size_t r = 0; r < series.size(); ++r) buf[r] = (series[r].*member)[t];
      const MeanStd ms = mean_std(buf);
      text += "," + format_double(ms.mean) + "," + format_double(ms.mean - 3.0 * ms.std) +
              "," + format_double(ms.mean + 3.0 * ms.std);
    }
    text += "," + format_double(best_arm) + "\n";
  }
  return text;
}

inline json metadata_json(const RunOutput& out) {
  json m;
  m["config"] = to_json(out.config);
  m["config_hash"] = config_hash(out.config);
  m["seeds"] = json::array();
  for (const auto& r : out.runs) m["seeds"].push_back(r.seed);
  m["eta"] = out.eta;
  m["Phi"] = total_target(out.config.phi);
  m["Theta"] = theta(out.config.K, out.config.phi);
  m["baselines"] = {{"s_star", out.baselines.s_star},
                    {"s_dagger", out.baselines.s_dagger},
                    {"s_star_method", out.baselines.s_star_method},
                    {"s_star_policy_class", "randomized per cost realization"}};
  if (out.baselines.s_star_method != "skipped") {
    m["baselines"]["saa_primal_welfare"] = out.saa.primal_welfare;
    m["baselines"]["saa_gap"] = out.saa.gap;
    m["baselines"]["saa_iterations"] = out.saa.iterations;
  }
  if (out.config.T >= 2) {
    m["bounds"] = {{"reg_bound", out.bounds.reg_bound},
                   {"vio_bound", out.bounds.vio_bound},
                   {"pro_bound", out.bounds.pro_bound},
                   {"best_delta", out.bounds.best_delta}};
  }
  m["wall_time_s"] = out.wall_time_s;
  return m;
}

// Executes config.R runs. Files are written under options.output_dir or
// config.output_dir.
inline RunOutput run(const RunConfig& config, const RunOptions& options = {}) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  out.config = config;
  out.eta = config.resolved_eta();
  out.baselines = compute_baselines(config, &out.saa, options.compute_s_star);
  out.output_dir = options.output_dir.value_or(config.output_dir);

  const bool keep_rows = options.write_files && options.write_slots;
  const bool keep_series = options.write_files && options.write_aggregate;
  std::vector<detail::RunArtifacts> artifacts(config.R);
  const std::size_t threads = std::max<std::size_t>(1, options.threads);
  if (threads == 1) {
    for (std::size_t r = 0; r < config.R; ++r) {
      artifacts[r] = detail::simulate(config, r, out.baselines, keep_rows, keep_series);
    }
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < config.R; r += threads) {
          artifacts[r] = detail::simulate(config, r, out.baselines, keep_rows, keep_series);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& a : artifacts) out.runs.push_back(a.summary);

  if (config.T >= 2 && !config.phi.empty() &&
      *std::min_element(config.phi.begin(), config.phi.end()) > 0.0) {
    const double mean_vio = out.stat([](const RunSummary& r) { return r.metrics.vio; }).mean;
    out.bounds = performance_bounds(config.K, config.T, config.phi, mean_vio);
  }
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (options.write_files) {
    std::filesystem::create_directories(out.output_dir);
    if (keep_rows) {
      std::ofstream slots(out.output_dir / "slots.csv", std::ios::binary);
      if (!slots) throw Error("cannot write slots.csv");
      slots << slot_csv_header(config.K, config.N) << '\n';
      for (const auto& a : artifacts) slots << a.rows;
    }
    detail::write_text(out.output_dir / "summary.csv", summary_csv(out));
    if (keep_series) {
      std::vector<detail::SlotSeries> series;
      for (auto& a : artifacts) series.push_back(std::move(a.series));
      detail::write_text(out.output_dir / "aggregate.csv", aggregate_csv(config, series));
    }
    // Replay needs an absolute price path.
    RunConfig stored = config;
    if (stored.cost_model.kind == CostModel::Kind::kEdgeComputing &&
        stored.cost_model.price_series_id != kBuiltinPrices) {
      const auto p = std::filesystem::path(stored.cost_model.price_series_id);
      if (p.is_relative()) stored.cost_model.price_series_id = std::filesystem::absolute(p).string();
    }
    RunOutput meta_view = out;
    meta_view.config = stored;
    detail::write_text(out.output_dir / "metadata.json", metadata_json(meta_view).dump(2) + "\n");
  }
  return out;
}

struct ReplayResult {
  SlotRecord record;
  std::string row;
  std::optional<Metrics> final_metrics;  // set when the replayed slot is T
};

namespace detail {

inline RunConfig load_stored_config(const std::filesystem::path& dir, json* meta_out = nullptr) {
  const json meta = json::parse(read_text(dir / "metadata.json"));
  if (meta_out) *meta_out = meta;
  return parse_config(meta.at("config"));
}

// Stored slot rows of one run, indexed by slot - 1.
inline std::vector<std::string> load_run_rows(const std::filesystem::path& dir,
                                              std::size_t run) {
  std::ifstream in(dir / "slots.csv", std::ios::binary);
  if (!in) throw MissingArtifactError("missing artifact '" + (dir / "slots.csv").string() + "'");
  std::string line;
  std::getline(in, line);  // header
  const std::string prefix = std::to_string(run) + ",";
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) rows.push_back(line);
  }
  return rows;
}

inline std::string load_summary_row(const std::filesystem::path& dir, std::size_t run) {
  std::istringstream in(read_text(dir / "summary.csv"));
  std::string line;
  std::getline(in, line);
  const std::string prefix = std::to_string(run) + ",";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) return line;
  }
  throw MissingArtifactError("summary.csv has no row for run " + std::to_string(run));
}

inline BaselineValues stored_baselines(const json& meta) {
  BaselineValues b;
  const json& j = meta.at("baselines");
  b.s_star = j.at("s_star").is_number() ? j.at("s_star").get<double>() : std::nan("");
  b.s_dagger = j.at("s_dagger").get<double>();
  b.s_star_method = j.at("s_star_method").get<std::string>();
  return b;
}

}  // namespace detail

// Re-simulates run `run` from its seed up to `slot` and checks the stored row.
// At the final slot the cumulative metrics are also checked against
// summary.csv.
inline ReplayResult replay(const std::filesystem::path& dir, std::int64_t slot,
                           std::size_t run = 0) {
  json meta;
  const RunConfig config = detail::load_stored_config(dir, &meta);
  if (slot < 1 || slot > config.T) {
    throw ValidationError("replay: slot out of range [1, " + std::to_string(config.T) + "]");
  }
  if (run >= config.R) throw ValidationError("replay: run index out of range");
  const auto rows = detail::load_run_rows(dir, run);
  if (rows.size() < static_cast<std::size_t>(slot)) {
    throw MissingArtifactError("slots.csv lacks slot " + std::to_string(slot));
  }
  RunSimulator sim(config, run);
  ReplayResult out;
  while (sim.next_slot() <= slot) out.record = sim.next();
  out.row = format_slot_row(run, out.record);
  if (out.row != rows[static_cast<std::size_t>(slot - 1)]) {
    throw ReplayMismatchError("replay mismatch at run " + std::to_string(run) + " slot " +
                              std::to_string(slot) + ":\n  stored:   " +
                              rows[static_cast<std::size_t>(slot - 1)] +
                              "\n  replayed: " + out.row);
  }
  if (slot == config.T) {
    RunSummary s;
    s.run = run;
    s.seed = config.seed + run;
    s.ledger = sim.ledger();
    s.metrics = finalize_metrics(s.ledger, detail::stored_baselines(meta), config.phi);
    const std::string stored = detail::load_summary_row(dir, run);
    if (format_summary_row(s) != stored) {
      throw ReplayMismatchError("replayed cumulative metrics differ from summary.csv for run " +
                                std::to_string(run));
    }
    out.final_metrics = s.metrics;
  }
  return out;
}

// Single pass over every slot of every run; equivalent to replay() on each
// slot. Returns the number of rows verified.
inline std::size_t replay_all(const std::filesystem::path& dir) {
  json meta;
  const RunConfig config = detail::load_stored_config(dir, &meta);
  std::size_t verified = 0;
  for (std::size_t run = 0; run < config.R; ++run) {
    const auto rows = detail::load_run_rows(dir, run);
    if (rows.size() != static_cast<std::size_t>(config.T)) {
      throw MissingArtifactError("slots.csv has " + std::to_string(rows.size()) +
                                 " rows for run " + std::to_string(run));
    }
    RunSimulator sim(config, run);
    while (!sim.done()) {
      const SlotRecord rec = sim.next();
      const std::string row = format_slot_row(run, rec);
      if (row != rows[static_cast<std::size_t>(rec.slot - 1)]) {
        throw ReplayMismatchError("replay mismatch at run " + std::to_string(run) +
                                  " slot " + std::to_string(rec.slot));
      }
      ++verified;
    }
    RunSummary s;
    s.run = run;
    s.seed = config.seed + run;
    s.ledger = sim.ledger();
    s.metrics = finalize_metrics(s.ledger, detail::stored_baselines(meta), config.phi);
    if (format_summary_row(s) != detail::load_summary_row(dir, run)) {
      throw ReplayMismatchError("summary mismatch for run " + std::to_string(run));
    }
  }
  return verified;
}

// Per-slot averages of one sweep point, across its runs.
struct SweepPoint {
  std::size_t num_agents = 0;
  double phi_n = 0.0;
  double s_dagger = 0.0;
  double s_star = 0.0;
  std::vector<double> reward, cost, welfare, profit, payoff, degradation;  // per run
};

inline SweepPoint summarize_sweep_point(const RunOutput& out) {
  SweepPoint p;
  p.num_agents = out.config.N;
  p.phi_n = out.config.phi.front();
  p.s_dagger = out.baselines.s_dagger;
  p.s_star = out.baselines.s_star;
  const double t = static_cast<double>(out.config.T);
  const double n = static_cast<double>(out.config.N);
  for (const auto& r : out.runs) {
    p.reward.push_back(r.ledger.cum_reward / t);
    p.cost.push_back(r.ledger.cum_cost / t);
    p.welfare.push_back(r.ledger.cum_welfare / t);
    p.profit.push_back((r.ledger.cum_reward - r.ledger.cum_payment) / t);
    p.payoff.push_back(r.ledger.cum_agent_payoff() / (t * n));
    p.degradation.push_back(r.metrics.deg / t);
  }
  return p;
}

inline std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::string text = "N,phi_n,s_dagger,s_star";
  for (const char* name : {"reward", "cost", "welfare", "profit", "agent_payoff", "degradation"}) {
    text += std::string(",") + name + "_mean," + name + "_std";
  }
  text += "\n";
  for (const auto& p : points) {
    text += std::to_string(p.num_agents) + "," + format_double(p.phi_n) + "," +
            format_double(p.s_dagger) + "," + format_double(p.s_star);
    for (const auto* v : {&p.reward, &p.cost, &p.welfare, &p.profit, &p.payoff, &p.degradation}) {
      const MeanStd ms = mean_std(*v);
      text += "," + format_double(ms.mean) + "," + format_double(ms.std);
    }
    text += "\n";
  }
  return text;
}

// Runs each sweep config in turn. With files enabled, point N goes to
// <out>/N<N>/ and the cross-point table to <out>/sweep.csv.
inline std::vector<SweepPoint> run_sweep(const std::vector<RunConfig>& configs,
                                         const RunOptions& options,
                                         const std::filesystem::path& out_dir) {
  std::vector<SweepPoint> points;
  for (const auto& c : configs) {
    RunOptions o = options;
    o.output_dir = (out_dir / ("N" + std::to_string(c.N))).string();
    points.push_back(summarize_sweep_point(run(c, o)));
  }
  if (options.write_files) {
    std::filesystem::create_directories(out_dir);
    detail::write_text(out_dir / "sweep.csv", sweep_csv(points));
  }
  return points;
}

// Ordinary least-squares slope of y on x.
inline double fitted_slope(std::span<const double> x, std::span<const double> y) {
  require_size(y.size(), x.size(), "fitted_slope");
  const MeanStd mx = mean_std(x);
  const MeanStd my = mean_std(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx.mean) * (y[i] - my.mean);
    sxx += (x[i] - mx.mean) * (x[i] - mx.mean);
  }
  return sxx == 0.0 ? 0.0 : sxy / sxx;
}

}  // namespace iol
