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


// Command-line front end.
//
//   iol_cli run <config.json> [--seed S] [--runs R] [--out DIR]
//   iol_cli preset small [--T T] [--seed S] [--runs R] [--out DIR]
//   iol_cli preset large [--alpha A] [--beta B] [--T T] [--agents 2,4,...]
//   iol_cli oracle <config.json>
//   iol_cli replay <DIR> --slot K [--run R]
//   iol_cli replay <DIR> --all

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iol/iol.hpp"

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::string> out;
  std::size_t threads = 1;
  bool no_slots = false;
  bool config_only = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Base seed; run r uses seed + r");
  cmd->add_option("--runs", c.runs, "Number of independent runs R");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--threads", c.threads, "Worker threads over runs")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-slots", c.no_slots, "Skip slots.csv and aggregate.csv");
  cmd->add_flag("--config-only", c.config_only, "Print the resolved config and exit");
}

void apply(iol::RunConfig& cfg, const Common& c) {
  if (c.seed) cfg.seed = *c.seed;
  if (c.runs) cfg.R = *c.runs;
  if (c.out) cfg.output_dir = *c.out;
}

iol::RunOptions options_from(const Common& c) {
  iol::RunOptions o;
  o.threads = c.threads;
  o.write_slots = !c.no_slots;
  o.write_aggregate = !c.no_slots;
  return o;
}

void print_run(const iol::RunOutput& out) {
  auto stat = [&](auto f) { return out.stat(f); };
  const auto reg = stat([](const iol::RunSummary& r) { return r.metrics.reg; });
  const auto vio = stat([](const iol::RunSummary& r) { return r.metrics.vio; });
  const auto pro = stat([](const iol::RunSummary& r) { return r.metrics.pro; });
  const auto deg = stat([](const iol::RunSummary& r) { return r.metrics.deg; });
  std::printf("config_hash %s\n", iol::config_hash(out.config).c_str());
  std::printf("S*  %.6f  [%s]\nS+  %.6f\n", out.baselines.s_star,
              out.baselines.s_star_method.c_str(), out.baselines.s_dagger);
  std::printf("Reg %.4f +- %.4f   bound %.4f\n", reg.mean, reg.std, out.bounds.reg_bound);
  std::printf("Vio %.4f +- %.4f   bound %.4f\n", vio.mean, vio.std, out.bounds.vio_bound);
  std::printf("Pro %.4f +- %.4f   bound %.4f\n", pro.mean, pro.std, out.bounds.pro_bound);
  std::printf("Deg %.4f +- %.4f\n", deg.mean, deg.std);
  std::printf("wall %.2fs  ->  %s\n", out.wall_time_s, out.output_dir.string().c_str());
}

int cmd_run(const std::string& path, const Common& c) {
  iol::RunConfig cfg = iol::load_config(path);
  apply(cfg, c);
  if (c.config_only) {
    std::cout << iol::serialize_config(cfg) << "\n";
    return 0;
  }
  print_run(iol::run(cfg, options_from(c)));
  return 0;
}

int cmd_preset(const std::string& which, double alpha, double beta, std::optional<std::int64_t> T,
               const std::vector<std::size_t>& agents, const Common& c) {
  if (which == "small") {
    iol::RunConfig cfg = iol::preset_small_scale(T.value_or(20000));
    if (!c.out) cfg.output_dir = "out/small";
    apply(cfg, c);
    if (c.config_only) {
      std::cout << iol::serialize_config(cfg) << "\n";
      return 0;
    }
    print_run(iol::run(cfg, options_from(c)));
    return 0;
  }
  std::vector<iol::RunConfig> sweep;
  for (auto cfg : iol::preset_large_scale(alpha, beta, T.value_or(100000))) {
    if (!agents.empty() && std::find(agents.begin(), agents.end(), cfg.N) == agents.end()) {
      continue;
    }
    apply(cfg, c);
    sweep.push_back(cfg);
  }
  if (sweep.empty()) throw iol::ValidationError("no sweep point selected");
  if (c.config_only) {
    for (const auto& cfg : sweep) std::cout << iol::serialize_config(cfg) << "\n";
    return 0;
  }
  const std::string out = c.out.value_or("out/large");
  const auto points = iol::run_sweep(sweep, options_from(c), out);
  std::cout << iol::sweep_csv(points);
  return 0;
}

int cmd_oracle(const std::string& path, const Common& c) {
  iol::RunConfig cfg = iol::load_config(path);
  apply(cfg, c);
  iol::SaaResult saa;
  const auto b = iol::compute_baselines(cfg, &saa);
  std::printf("S*  %.6f  [%s]  primal %.6f  gap %.3g\n", b.s_star, b.s_star_method.c_str(),
              saa.primal_welfare, saa.gap);
  std::printf("S+  %.6f\n", b.s_dagger);
  std::printf("eta %.6g\n", cfg.resolved_eta());
  if (cfg.T >= 2) {
    const auto tb = iol::performance_bounds(cfg.K, cfg.T, cfg.phi, 0.0);
    std::printf("bounds at Vio=0: reg %.4f  vio %.4f (delta %.4g)  pro %.4f\n", tb.reg_bound,
                tb.vio_bound, tb.best_delta, tb.pro_bound);
  }
  return 0;
}

int cmd_replay(const std::string& dir, std::optional<std::int64_t> slot, std::size_t run,
               bool all) {
  if (all) {
    std::printf("replayed %zu rows: all match\n", iol::replay_all(dir));
    return 0;
  }
  if (!slot) throw iol::ValidationError("replay needs --slot or --all");
  const auto r = iol::replay(dir, *slot, run);
  std::printf("%s\nmatch\n", r.row.c_str());
  if (r.final_metrics) {
    std::printf("Reg %s  Vio %s  Pro %s  Deg %s  (equal to summary.csv)\n",
                iol::format_double(r.final_metrics->reg).c_str(),
                iol::format_double(r.final_metrics->vio).c_str(),
                iol::format_double(r.final_metrics->pro).c_str(),
                iol::format_double(r.final_metrics->deg).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incentivized online learning simulator"};
  app.require_subcommand(1);

  Common common;
  std::string config_path, preset_name, replay_dir;
  double alpha = 1.0, beta = 0.2;
  std::optional<std::int64_t> horizon, slot;
  std::vector<std::size_t> agents;
  std::size_t replay_run = 0;
  bool replay_every = false;

  auto* run_cmd = app.add_subcommand("run", "Run a config file");
  run_cmd->add_option("config", config_path, "Config JSON")->required()->check(CLI::ExistingFile);
  add_common(run_cmd, common);

  auto* preset_cmd = app.add_subcommand("preset", "Run a built-in experiment");
  preset_cmd->add_option("name", preset_name, "small | large")
      ->required()
      ->check(CLI::IsMember({"small", "large"}));
  preset_cmd->add_option("--alpha", alpha, "Crowd size parameter");
  preset_cmd->add_option("--beta", beta, "Agent growth exponent, in (0, 1/3)");
  preset_cmd->add_option("--T", horizon, "Horizon");
  preset_cmd->add_option("--agents", agents, "Restrict the large sweep to these N")->delimiter(',');
  add_common(preset_cmd, common);

  auto* oracle_cmd = app.add_subcommand("oracle", "Print S*, S+ and bounds");
  oracle_cmd->add_option("config", config_path, "Config JSON")->required()->check(CLI::ExistingFile);
  add_common(oracle_cmd, common);

  auto* replay_cmd = app.add_subcommand("replay", "Re-derive a stored slot");
  replay_cmd->add_option("dir", replay_dir, "Run output directory")->required();
  replay_cmd->add_option("--slot", slot, "Slot to replay (1-based)");
  replay_cmd->add_option("--run", replay_run, "Run index");
  replay_cmd->add_flag("--all", replay_every, "Replay every slot of every run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(config_path, common);
    if (*preset_cmd) return cmd_preset(preset_name, alpha, beta, horizon, agents, common);
    if (*oracle_cmd) return cmd_oracle(config_path, common);
    if (*replay_cmd) return cmd_replay(replay_dir, slot, replay_run, replay_every);
  } catch (const iol::ReplayMismatchError& e) {
    std::fprintf(stderr, "mismatch: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
