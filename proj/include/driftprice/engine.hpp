#pragma once

// The protocol loop: v_t is committed, p_t is posted, sigma_t is returned.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "driftprice/core.hpp"
#include "driftprice/environments.hpp"
#include "driftprice/random.hpp"
#include "driftprice/registry.hpp"
#include "driftprice/strategy.hpp"

namespace driftprice {

class PriceOutOfRange : public std::runtime_error {
 public:
  PriceOutOfRange(std::int64_t t, double price)
      : std::runtime_error("strategy posted price " + std::to_string(price) + " outside [0,1] at t=" +
                           std::to_string(t)),
        t_(t) {}
  std::int64_t index() const noexcept { return t_; }

 private:
  std::int64_t t_;
};

/// Stable per-purpose seed: splitmix64(fnv1a64(label) ^ base).
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  return splitmix64(fnv1a64(label) ^ base);
}

struct EpisodeConfig {
  EnvironmentSpec environment;
  std::string strategy = "s1";
  StrategyOptions options{};
  /// Overrides what the registry would tell the strategy.
  std::optional<Knowledge> knowledge;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> env_seed;
  std::optional<std::uint64_t> strat_seed;
  bool record_intervals = true;

  Horizon horizon() const { return environment.schedule.horizon(); }
  std::uint64_t environment_seed() const { return env_seed.value_or(derive_seed(seed, "environment")); }
  std::uint64_t strategy_seed() const { return strat_seed.value_or(derive_seed(seed, "strategy")); }
};

/// Play one episode between an already-built environment and strategy.
inline EpisodeTrace run_episode(Environment& env, PricingStrategy& strategy, std::uint64_t seed,
                                bool record_intervals = true) {
  const RateSchedule& schedule = env.schedule();
  const std::int64_t T = schedule.horizon().steps();
  std::vector<StepRecord> steps;
  std::vector<double> prices;
  std::vector<std::uint8_t> sold_bits;
  steps.reserve(static_cast<std::size_t>(T));
  prices.reserve(static_cast<std::size_t>(T));
  sold_bits.reserve(static_cast<std::size_t>(T));

  double previous = 0.0;
  for (std::int64_t t = 1; t <= T; ++t) {
    const double previous_rate = t > 1 ? schedule.at(t - 1) : 0.0;
    const RoundHistory history{t, prices, sold_bits, previous, previous_rate};
    const double v = env.commit(history);
    if (!in_unit_range(v)) {
      throw std::runtime_error("environment committed value " + std::to_string(v) + " outside [0,1] at t=" +
                               std::to_string(t));
    }
    if (t > 1 && std::abs(v - previous) > previous_rate + kRateSlack) {
      throw RateViolation(t - 1, std::abs(v - previous), previous_rate);
    }
    const Quote& q = strategy.quote();
    const double p = q.price;
    if (!std::isfinite(p) || !in_unit_range(p)) throw PriceOutOfRange(t, p);
    const bool sold = p <= v;
    steps.push_back(StepRecord{t, v, p, sold, record_intervals ? q.annotation() : std::nullopt});
    prices.push_back(p);
    sold_bits.push_back(sold ? 1 : 0);
    previous = v;
    if (t < T) strategy.observe(sold);
  }
  return EpisodeTrace(schedule.horizon(), schedule, std::move(steps), seed);
}

inline std::unique_ptr<PricingStrategy> make_strategy_for(const EpisodeConfig& config) {
  StrategyInput input{config.horizon(),
                      config.knowledge.value_or(knowledge_for(config.strategy, config.environment.schedule)),
                      config.strategy_seed(), config.options};
  return make_strategy(config.strategy, input);
}

inline EpisodeTrace run_episode(const EpisodeConfig& config) {
  auto env = make_environment(config.environment, config.environment_seed());
  auto strategy = make_strategy_for(config);
  return run_episode(*env, *strategy, config.seed, config.record_intervals);
}

struct BatchResult {
  std::optional<LossSummary> summary;
  std::string error;

  bool ok() const noexcept { return summary.has_value(); }
};

struct BatchOptions {
  unsigned parallelism = 1;
  bool progress = false;  // one line per finished episode on stderr
};

/// Runs every config; results are in input order and do not depend on the
/// degree of parallelism. An episode that throws is reported in place.
inline std::vector<BatchResult> run_batch(const std::vector<EpisodeConfig>& configs, BatchOptions options = {}) {
  std::vector<BatchResult> results(configs.size());
  if (configs.empty()) return results;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> finished{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < configs.size(); i = next.fetch_add(1)) {
      EpisodeConfig config = configs[i];
      config.record_intervals = false;
      try {
        results[i].summary = summarize(run_episode(config));
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
      const std::size_t done = finished.fetch_add(1) + 1;
      if (options.progress) {
        std::lock_guard lock(log_mutex);
        std::cerr << "[" << done << "/" << configs.size() << "] " << config.strategy << " "
                  << to_string(config.environment.kind) << (results[i].ok() ? "" : " FAILED: " + results[i].error)
                  << '\n';
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(options.parallelism, static_cast<unsigned>(configs.size())));
  if (n == 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

inline std::vector<BatchResult> run_batch(const std::vector<EpisodeConfig>& configs, unsigned parallelism) {
  return run_batch(configs, BatchOptions{parallelism, false});
}

}  // namespace driftprice
