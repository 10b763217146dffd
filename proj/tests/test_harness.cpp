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


#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "iol/harness.hpp"

namespace iol {
namespace {

namespace fs = std::filesystem;

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("iol_harness_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  }

  RunOptions to(const fs::path& p) const {
    RunOptions o;
    o.output_dir = p.string();
    return o;
  }

  fs::path dir_;
};

RunConfig small_config(std::int64_t T = 300, std::size_t R = 2) {
  RunConfig c = preset_small_scale(T, R, 7);
  c.oracle = {500, 50, 0.5};
  return c;
}

// One agent, one certain arm, cost pinned at 0.3.
RunConfig deterministic_config() {
  RunConfig c;
  c.K = 1;
  c.N = 1;
  c.T = 1;
  c.R = 1;
  c.arms = {ArmSpec::bernoulli(1.0)};
  c.cost_model.kind = CostModel::Kind::kTruncatedNormal;
  c.cost_model.mu = 0.3;
  c.cost_model.sigma = 0.0;
  c.phi = {0.4};
  c.eta = 0.25;
  c.agent_policies = {AgentPolicy::truthful()};
  c.oracle = {10, 5, 0.5};
  return c;
}

TEST_F(HarnessTest, SingleSlotMatchesHandTrace) {
  const auto out = run(deterministic_config(), to(dir_));
  const auto rows = lines(slurp(dir_ / "slots.csv"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "run,slot,rhat_1,assignment,pay_1,lambda_1,reward,cost,welfare,profit");
  // r_hat = 1 (unpulled), w = 0.7 > 0, lone agent pays no externality so
  // y = 1, lambda starts at 0; welfare 1 - 0.3, profit 1 - 1.
  EXPECT_EQ(rows[1], "0,1,1,1:1,1,0,1,0.3,0.7,0");
  EXPECT_NEAR(out.runs[0].ledger.cum_welfare, 0.7, 1e-15);
  EXPECT_DOUBLE_EQ(out.baselines.s_dagger, 0.4);
}

TEST_F(HarnessTest, SameSeedGivesByteIdenticalFiles) {
  const auto c = small_config();
  run(c, to(dir_ / "a"));
  run(c, to(dir_ / "b"));
  for (const char* f : {"slots.csv", "summary.csv", "aggregate.csv"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  auto meta_a = json::parse(slurp(dir_ / "a" / "metadata.json"));
  auto meta_b = json::parse(slurp(dir_ / "b" / "metadata.json"));
  meta_a.erase("wall_time_s");
  meta_b.erase("wall_time_s");
  EXPECT_EQ(meta_a, meta_b);
  EXPECT_EQ(meta_a["config_hash"], config_hash(c));
  EXPECT_EQ(meta_a["baselines"]["s_star_method"], "dual-saa(M=500)");
}

TEST_F(HarnessTest, ThreadCountDoesNotChangeOutput) {
  auto c = small_config(200, 3);
  RunOptions one = to(dir_ / "one"), many = to(dir_ / "many");
  many.threads = 3;
  run(c, one);
  run(c, many);
  EXPECT_EQ(slurp(dir_ / "one" / "slots.csv"), slurp(dir_ / "many" / "slots.csv"));
  EXPECT_EQ(slurp(dir_ / "one" / "summary.csv"), slurp(dir_ / "many" / "summary.csv"));
}

TEST_F(HarnessTest, RowCountAndSeeds) {
  const auto c = small_config(250, 3);
  const auto out = run(c, to(dir_));
  EXPECT_EQ(lines(slurp(dir_ / "slots.csv")).size(), 1u + 3u * 250u);
  EXPECT_EQ(lines(slurp(dir_ / "aggregate.csv")).size(), 1u + 250u);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(out.runs[r].seed, c.seed + r);
    EXPECT_EQ(out.runs[r].ledger.slots, 250);
  }
}

TEST_F(HarnessTest, SummaryMeansAreArithmeticMeans) {
  const auto out = run(small_config(400, 2), to(dir_));
  const auto rows = lines(slurp(dir_ / "summary.csv"));
  ASSERT_EQ(rows.size(), 5u);  // header, 2 runs, mean, std
  const double reg0 = out.runs[0].metrics.reg, reg1 = out.runs[1].metrics.reg;
  const auto mean = out.stat([](const RunSummary& r) { return r.metrics.reg; });
  EXPECT_DOUBLE_EQ(mean.mean, (reg0 + reg1) / 2.0);
  EXPECT_NEAR(mean.std, std::abs(reg0 - reg1) / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(rows[3].rfind("mean,,400," + format_double(mean.mean) + ",", 0), 0u) << rows[3];
}

TEST_F(HarnessTest, AggregationMatchesRecomputation) {
  const auto out = run(small_config(300, 4), to(dir_));
  for (auto field : {+[](const RunSummary& r) { return r.metrics.vio; },
                     +[](const RunSummary& r) { return r.ledger.cum_payment; }}) {
    const auto v = out.column(field);
    double m = 0.0;
    for (double x : v) m += x / 4.0;
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const auto got = out.stat(field);
    EXPECT_NEAR(got.mean, m, 1e-9 * (1.0 + std::abs(m)));
    EXPECT_NEAR(got.std, std::sqrt(ss / 3.0), 1e-9 * (1.0 + std::abs(m)));
  }
}

TEST_F(HarnessTest, LedgerIdentityEverySlot) {
  const auto c = small_config(300, 1);
  RunSimulator sim(c, 0);
  while (!sim.done()) {
    sim.next();
    const auto& l = sim.ledger();
    ASSERT_NEAR(l.cum_welfare, l.cum_reward - l.cum_cost, 1e-9 * static_cast<double>(l.slots));
    for (auto u : l.utilization) ASSERT_LE(u, l.slots);
  }
}

TEST_F(HarnessTest, ReplayFirstAndFinalSlot) {
  const auto c = small_config(300, 2);
  const auto out = run(c, to(dir_));
  const auto first = replay(dir_, 1, 0);
  EXPECT_EQ(first.record.slot, 1);
  EXPECT_FALSE(first.final_metrics.has_value());
  const auto last = replay(dir_, 300, 1);
  ASSERT_TRUE(last.final_metrics.has_value());
  EXPECT_EQ(last.final_metrics->reg, out.runs[1].metrics.reg);
  EXPECT_EQ(last.final_metrics->pro, out.runs[1].metrics.pro);
  EXPECT_EQ(replay_all(dir_), 600u);
  EXPECT_THROW(replay(dir_, 0), ValidationError);
  EXPECT_THROW(replay(dir_, 301), ValidationError);
  EXPECT_THROW(replay(dir_, 1, 2), ValidationError);
}

TEST_F(HarnessTest, TamperedCsvIsDetected) {
  run(small_config(100, 1), to(dir_));
  auto text = slurp(dir_ / "slots.csv");
  const auto pos = text.find("\n0,5,");
  ASSERT_NE(pos, std::string::npos);
  const auto comma = text.find(',', pos + 6);
  text.insert(comma, "1");  // perturb rhat_1 of slot 5
  std::ofstream(dir_ / "slots.csv", std::ios::binary) << text;
  EXPECT_NO_THROW(replay(dir_, 4));
  EXPECT_THROW(replay(dir_, 5), ReplayMismatchError);
  EXPECT_THROW(replay_all(dir_), ReplayMismatchError);
}

TEST_F(HarnessTest, TamperedSummaryIsDetected) {
  run(small_config(50, 1), to(dir_));
  auto text = slurp(dir_ / "summary.csv");
  text.replace(text.find("\n0,7,50,") + 8, 1, "9");
  std::ofstream(dir_ / "summary.csv", std::ios::binary) << text;
  EXPECT_NO_THROW(replay(dir_, 49));
  EXPECT_THROW(replay(dir_, 50), ReplayMismatchError);
}

TEST_F(HarnessTest, MissingArtifacts) {
  EXPECT_THROW(replay(dir_, 1), MissingArtifactError);
  run(small_config(20, 1), to(dir_));
  fs::remove(dir_ / "slots.csv");
  EXPECT_THROW(replay(dir_, 1), MissingArtifactError);
}

TEST_F(HarnessTest, InvalidConfigRejected) {
  auto c = small_config();
  c.phi = {0.5};
  EXPECT_THROW(run(c, to(dir_)), ValidationError);
}

TEST_F(HarnessTest, SweepWritesPointsAndTable) {
  auto sweep = preset_large_scale(1.0, 0.2, 300, 2);
  for (auto& c : sweep) c.oracle = {200, 20, 0.5};
  const auto points = run_sweep(sweep, {}, dir_);
  ASSERT_EQ(points.size(), 3u);
  EXPECT_TRUE(fs::exists(dir_ / "N2" / "summary.csv"));
  EXPECT_EQ(lines(slurp(dir_ / "sweep.csv")).size(), 4u);
  EXPECT_EQ(points[1].reward.size(), 2u);
}

TEST(Slope, LeastSquares) {
  const std::vector<double> x = {1, 2, 3, 4}, y = {2, 4, 6, 8}, flat = {1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(fitted_slope(x, y), 2.0);
  EXPECT_DOUBLE_EQ(fitted_slope(x, flat), 0.0);
}

}  // namespace
}  // namespace iol
