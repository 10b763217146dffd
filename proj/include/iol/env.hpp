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

// Hidden ground truth of an incentivized bandit: stochastic arm rewards and
// private per-agent costs, realized slot by slot from a seed.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <iterator>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "iol/common.hpp"

namespace iol {

class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class NegativePriceError : public ParseError {
 public:
  using ParseError::ParseError;
};

class EmptySeriesError : public ParseError {
 public:
  using ParseError::ParseError;
};

struct ArmSpec {
  enum class Kind { kBernoulli, kUniform };

  Kind kind = Kind::kBernoulli;
  double lo = 0.0;  // uniform support; unused for bernoulli
  double hi = 1.0;
  double mean_reward = 0.5;

  static ArmSpec bernoulli(double mean) {
    ArmSpec a{Kind::kBernoulli, 0.0, 1.0, mean};
    a.validate();
    return a;
  }
  static ArmSpec uniform(double lo, double hi) {
    ArmSpec a{Kind::kUniform, lo, hi, 0.5 * (lo + hi)};
    a.validate();
    return a;
  }

  void validate() const {
    if (!(mean_reward >= 0.0 && mean_reward <= 1.0)) {
      throw ValidationError("arm mean reward must lie in [0,1]");
    }
    if (kind == Kind::kUniform) {
      if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) {
        throw ValidationError("uniform arm support must satisfy 0<=lo<=hi<=1");
      }
      if (std::abs(0.5 * (lo + hi) - mean_reward) > 1e-12) {
        throw ValidationError("uniform arm mean must be (lo+hi)/2");
      }
    }
  }

  double stddev() const {
    if (kind == Kind::kBernoulli) {
      return std::sqrt(mean_reward * (1.0 - mean_reward));
    }
    return (hi - lo) / std::sqrt(12.0);
  }

  template <class Engine>
  double sample(Engine& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (kind == Kind::kBernoulli) return u(rng) < mean_reward ? 1.0 : 0.0;
    return lo + (hi - lo) * u(rng);
  }

  friend bool operator==(const ArmSpec&, const ArmSpec&) = default;
};

// Step-function price trace indexed by slot. Slots past the last entry wrap
// around to the first.
class PriceSeries {
 public:
  struct Entry {
    std::int64_t slot;
    double price;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  PriceSeries() = default;
  explicit PriceSeries(std::vector<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("price series is empty");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (!(entries_[i].price >= 0.0) || !std::isfinite(entries_[i].price)) {
        throw ValidationError("negative price at entry " + std::to_string(i + 1));
      }
      if (i > 0 && entries_[i].slot <= entries_[i - 1].slot) {
        throw ValidationError("price series slots must be strictly increasing");
      }
    }
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Number of distinct slots covered before the series repeats.
  std::int64_t period() const {
    return entries_.back().slot - entries_.front().slot + 1;
  }

  double price_at(std::int64_t slot) const {
    const std::int64_t first = entries_.front().slot;
    std::int64_t offset = (slot - first) % period();
    if (offset < 0) offset += period();
    const std::int64_t s = first + offset;
    // Last entry with entry.slot <= s.
    auto it = std::upper_bound(
        entries_.begin(), entries_.end(), s,
        [](std::int64_t v, const Entry& e) { return v < e.slot; });
    return std::prev(it)->price;
  }

  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

 private:
  std::vector<Entry> entries_;
};

// Parses `slot,price` CSV text. Row numbers in errors count the header as
// row 1.
inline PriceSeries load_price_series(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  bool have_header = false;
  std::vector<PriceSeries::Entry> entries;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
          static_cast<unsigned char>(line[1]) == 0xBB &&
          static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3);
      }
      if (line != "slot,price") {
        throw ParseError(row, "expected header 'slot,price'");
      }
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError(row, "expected two comma-separated fields");
    }
    const std::string slot_text = line.substr(0, comma);
    const std::string price_text = line.substr(comma + 1);
    std::int64_t slot = 0;
    double price = 0.0;
    {
      auto [p, ec] = std::from_chars(slot_text.data(),
                                     slot_text.data() + slot_text.size(), slot);
      if (ec != std::errc() || p != slot_text.data() + slot_text.size()) {
        throw ParseError(row, "malformed slot '" + slot_text + "'");
      }
    }
    {
      auto [p, ec] = std::from_chars(price_text.data(),
                                     price_text.data() + price_text.size(), price);
      if (ec != std::errc() || p != price_text.data() + price_text.size() ||
          !std::isfinite(price)) {
        throw ParseError(row, "malformed price '" + price_text + "'");
      }
    }
    if (price < 0.0) throw NegativePriceError(row, "negative price " + price_text);
    if (!entries.empty() && slot <= entries.back().slot) {
      throw ParseError(row, "slot indices must be strictly increasing");
    }
    entries.push_back({slot, price});
  }
  if (!have_header) throw EmptySeriesError(1, "empty input, missing header");
  if (entries.empty()) throw EmptySeriesError(row, "empty price series");
  return PriceSeries(std::move(entries));
}

inline PriceSeries load_price_series(const std::string& csv_text) {
  std::istringstream in(csv_text);
  return load_price_series(in);
}

// One week of hourly prices in normalized units: a daily cycle peaking in the
// evening over a slower weekly swell, bounded in [1, 7].
inline PriceSeries synthetic_price_series() {
  std::vector<PriceSeries::Entry> entries;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (int h = 1; h <= 168; ++h) {
    const double daily = std::sin(kTwoPi * (h - 12) / 24.0);
    const double weekly = std::sin(kTwoPi * h / 168.0);
    const double p = 4.0 + 2.0 * daily + 1.0 * weekly;
    // Quantize to 1e-4 so the CSV export round-trips exactly.
    entries.push_back({h, std::round(p * 1e4) / 1e4});
  }
  return PriceSeries(std::move(entries));
}

inline std::string to_csv(const PriceSeries& series) {
  std::string out = "slot,price\n";
  for (const auto& e : series.entries()) {
    out += std::to_string(e.slot) + "," + format_double(e.price) + "\n";
  }
  return out;
}

// Normal(mu, sigma) conditioned on [lo, hi], by rejection.
struct TruncatedNormal {
  double mu = 0.0;
  double sigma = 1.0;
  double lo = 0.0;
  double hi = 1.0;

  double support_mass() const {
    if (sigma <= 0.0) return (mu >= lo && mu <= hi) ? 1.0 : 0.0;
    const double a = (lo - mu) / (sigma * std::numbers::sqrt2);
    const double b = (hi - mu) / (sigma * std::numbers::sqrt2);
    return 0.5 * (std::erf(b) - std::erf(a));
  }

  void validate() const {
    if (!(lo <= hi)) throw ValidationError("truncated normal: lo > hi");
    if (!(sigma >= 0.0) || !std::isfinite(mu)) {
      throw ValidationError("truncated normal: invalid parameters");
    }
    if (lo < hi && sigma > 0.0 && support_mass() < 1e-6) {
      throw ValidationError("truncated normal: support has negligible mass");
    }
  }

  template <class Engine>
  double sample(Engine& rng) const {
    if (lo >= hi) return lo;
    if (sigma <= 0.0) return std::clamp(mu, lo, hi);
    std::normal_distribution<double> normal(mu, sigma);
    for (;;) {
      const double x = normal(rng);
      if (x >= lo && x <= hi) return x;
    }
  }

  friend bool operator==(const TruncatedNormal&, const TruncatedNormal&) = default;
};

struct CostModel {
  enum class Kind { kTruncatedNormal, kEdgeComputing };

  Kind kind = Kind::kTruncatedNormal;
  double c_min = 0.0;
  // kTruncatedNormal: cost ~ N(mu, sigma) truncated to [c_min, 1].
  double mu = 0.3;
  double sigma = 0.1;
  // kEdgeComputing: cost = price(t) * energy, energy ~ N(energy_mu,
  // energy_sigma) truncated to [0, energy_max], clamped into [c_min, 1].
  std::string price_series_id;
  std::shared_ptr<const PriceSeries> prices;
  double energy_mu = 0.05;
  double energy_sigma = 0.02;
  double energy_max = 0.1;

  void validate() const {
    if (!(c_min >= 0.0 && c_min <= 1.0)) {
      throw ValidationError("c_min must lie in [0,1]");
    }
    if (kind == Kind::kTruncatedNormal) {
      TruncatedNormal{mu, sigma, c_min, 1.0}.validate();
    } else {
      if (!prices) throw ValidationError("edge-computing cost model needs prices");
      if (!(energy_max >= 0.0)) throw ValidationError("energy_max must be >= 0");
      TruncatedNormal{energy_mu, energy_sigma, 0.0, energy_max}.validate();
    }
  }

  template <class Engine>
  double sample(Engine& rng, std::int64_t slot) const {
    if (kind == Kind::kTruncatedNormal) {
      return TruncatedNormal{mu, sigma, c_min, 1.0}.sample(rng);
    }
    const double energy =
        TruncatedNormal{energy_mu, energy_sigma, 0.0, energy_max}.sample(rng);
    return std::clamp(prices->price_at(slot) * energy, c_min, 1.0);
  }

  friend bool operator==(const CostModel& a, const CostModel& b) {
    const bool same_prices = (a.prices == b.prices) ||
                             (a.prices && b.prices && *a.prices == *b.prices);
    return a.kind == b.kind && a.c_min == b.c_min && a.mu == b.mu &&
           a.sigma == b.sigma && a.price_series_id == b.price_series_id &&
           same_prices && a.energy_mu == b.energy_mu &&
           a.energy_sigma == b.energy_sigma && a.energy_max == b.energy_max;
  }
};

struct EnvRealization {
  std::vector<double> rewards;  // r^t, one per arm
  Matrix costs;                 // c^t, agents x arms
  std::int64_t slot = 0;
};

class Environment {
 public:
  Environment(std::vector<ArmSpec> arms, CostModel cost_model,
              std::size_t num_agents, std::uint64_t seed)
      : arms_(std::move(arms)),
        cost_model_(std::move(cost_model)),
        num_agents_(num_agents),
        seed_(seed) {
    if (arms_.empty()) throw ValidationError("environment needs at least one arm");
    if (num_agents_ == 0) throw ValidationError("environment needs at least one agent");
    for (const auto& a : arms_) a.validate();
    cost_model_.validate();
  }

  std::size_t num_arms() const { return arms_.size(); }
  std::size_t num_agents() const { return num_agents_; }
  const std::vector<ArmSpec>& arms() const { return arms_; }
  const CostModel& cost_model() const { return cost_model_; }
  std::uint64_t seed() const { return seed_; }

  std::vector<double> mean_rewards() const {
    std::vector<double> out;
    out.reserve(arms_.size());
    for (const auto& a : arms_) out.push_back(a.mean_reward);
    return out;
  }

  // Draws for slot t come from a stream keyed on (seed, t) alone, so replay
  // needs no history and distinct slots never share draws.
  EnvRealization sample_slot(std::int64_t slot) const {
    if (slot < 1) throw ValidationError("slot must be >= 1");
    std::mt19937_64 rng(mix_seed(seed_, static_cast<std::uint64_t>(slot)));
    EnvRealization out;
    out.slot = slot;
    out.rewards.reserve(arms_.size());
    for (const auto& a : arms_) out.rewards.push_back(a.sample(rng));
    out.costs = sample_costs(rng, slot);
    return out;
  }

  // Independent cost draw for oracle sampling. Edge-computing samples sweep
  // the price trace so the sample average covers its cycle.
  Matrix sample_oracle_costs(std::size_t index) const {
    std::mt19937_64 rng(mix_seed(seed_ ^ 0xA5A5A5A55A5A5A5AULL, index));
    std::int64_t slot = 1;
    if (cost_model_.kind == CostModel::Kind::kEdgeComputing) {
      const auto& first = cost_model_.prices->entries().front().slot;
      slot = first + static_cast<std::int64_t>(
                         index % static_cast<std::size_t>(cost_model_.prices->period()));
    }
    return sample_costs(rng, slot);
  }

 private:
  template <class Engine>
  Matrix sample_costs(Engine& rng, std::int64_t slot) const {
    Matrix costs(num_agents_, arms_.size());
    for (std::size_t n = 0; n < num_agents_; ++n) {
      for (std::size_t k = 0; k < arms_.size(); ++k) {
        costs(n, k) = cost_model_.sample(rng, slot);
      }
    }
    return costs;
  }

  std::vector<ArmSpec> arms_;
  CostModel cost_model_;
  std::size_t num_agents_;
  std::uint64_t seed_;
};

}  // namespace iol
