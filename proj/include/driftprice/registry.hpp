#pragma once

// Strategy catalog: identifiers, aliases, what each one is told about the
// rate, and which loss it is judged by.

#include <array>
#include <memory>
#include <string>
#include <string_view>

#include "driftprice/adaptive_rate.hpp"
#include "driftprice/exp3.hpp"
#include "driftprice/known_rate.hpp"
#include "driftprice/strategy.hpp"

namespace driftprice {

enum class KnowledgeKind : std::uint8_t { known_fixed, known_dynamic, unknown };

inline constexpr std::string_view to_string(KnowledgeKind k) noexcept {
  switch (k) {
    case KnowledgeKind::known_fixed: return "known_fixed";
    case KnowledgeKind::known_dynamic: return "known_dynamic";
    case KnowledgeKind::unknown: return "unknown";
  }
  return "unknown";
}

struct StrategyInfo {
  std::string_view id;
  std::string_view alias;
  KnowledgeKind knowledge;
  LossMetric metric;
  std::string_view summary;
};

inline constexpr std::array<StrategyInfo, 15> kStrategies{{
    {"s1", "alg1-adv-sym-known", KnowledgeKind::known_fixed, LossMetric::symmetric,
     "bisection with a known rate"},
    {"s2", "alg2-locate", KnowledgeKind::known_fixed, LossMetric::symmetric,
     "repeated locate to width O(eps)"},
    {"s3", "alg3-adv-rev-known", KnowledgeKind::known_fixed, LossMetric::revenue,
     "locate to sqrt(eps), price at the interval bottom for eps^-1/2 steps"},
    {"s4", "alg4-stoch-rev-known", KnowledgeKind::known_fixed, LossMetric::revenue,
     "locate to 6 eps, fixed discounted price for eps^-2/3 steps"},
    {"s5", "alg5-adv-sym-unknown", KnowledgeKind::unknown, LossMetric::symmetric,
     "three-step probe rounds, eps_hat doubling from 1/T"},
    {"s6", "alg6-adv-rev-unknown", KnowledgeKind::unknown, LossMetric::revenue,
     "s3 phases with a random check step, eps_hat doubling"},
    {"s7", "alg7-stoch-rev-unknown", KnowledgeKind::unknown, LossMetric::revenue,
     "s4 phases with a random check step, eps_hat doubling"},
    {"s8", "alg8-adv-sym-decreasing", KnowledgeKind::unknown, LossMetric::symmetric,
     "probe rounds with eps_hat doubling and halving"},
    {"s9", "alg9-adv-rev-decreasing", KnowledgeKind::unknown, LossMetric::revenue,
     "blocks of s6 phases, halving after a clean block"},
    {"s10", "stoch-rev-decreasing", KnowledgeKind::unknown, LossMetric::revenue,
     "blocks of s7 phases, halving after a clean block"},
    {"s11", "alg10-adv-sym-arbitrary", KnowledgeKind::unknown, LossMetric::symmetric,
     "serialized probes at 2^j/T around the interval"},
    {"s12", "adv-sym-known-dynamic", KnowledgeKind::known_dynamic, LossMetric::symmetric,
     "bisection with per-step known rates"},
    {"s13", "adv-rev-known-dynamic", KnowledgeKind::known_dynamic, LossMetric::revenue,
     "s3 with phases cut by accumulated rate"},
    {"s14", "stoch-rev-known-dynamic", KnowledgeKind::known_dynamic, LossMetric::revenue,
     "s4 with phases cut by accumulated squared rate"},
    {"s15", "exp3", KnowledgeKind::known_fixed, LossMetric::revenue,
     "EXP3 over the price grid {eps, 2 eps, ..., 1}"},
}};

inline const StrategyInfo& strategy_info(std::string_view name) {
  for (const auto& info : kStrategies) {
    if (info.id == name || info.alias == name) return info;
  }
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

/// Canonical id (s1..s15) for an id or alias.
inline std::string canonical_strategy_id(std::string_view name) { return std::string(strategy_info(name).id); }

/// What a strategy is told about an episode run on `schedule`.
inline Knowledge knowledge_for(std::string_view name, const RateSchedule& schedule) {
  switch (strategy_info(name).knowledge) {
    case KnowledgeKind::known_fixed: return KnownFixed{schedule.max_rate()};
    case KnowledgeKind::known_dynamic: return KnownDynamic{schedule};
    case KnowledgeKind::unknown: return Unknown{};
  }
  return Unknown{};
}

inline std::unique_ptr<PricingStrategy> make_strategy(std::string_view name, const StrategyInput& in) {
  const std::string_view id = strategy_info(name).id;
  auto wrap = [](PriceScript s) -> std::unique_ptr<PricingStrategy> {
    return std::make_unique<CoroutineStrategy>(std::move(s));
  };
  if (id == "s1") return wrap(s1_script(known_fixed_eps(in, "s1")));
  if (id == "s2") return wrap(s2_script(known_fixed_eps(in, "s2")));
  if (id == "s3") return wrap(s3_script(known_fixed_eps(in, "s3"), in.horizon));
  if (id == "s4") return wrap(s4_script(known_fixed_eps(in, "s4"), in.horizon));
  if (id == "s5") return wrap(s5_script(in.horizon));
  if (id == "s6") return wrap(s6_script(in.horizon, in.rng_seed));
  if (id == "s7") return wrap(s7_script(in.horizon, in.rng_seed, in.options.offset_variant));
  if (id == "s8") return wrap(s8_script(in.horizon));
  if (id == "s9") return wrap(s9_script(in.horizon, in.rng_seed));
  if (id == "s10") return wrap(s10_script(in.horizon, in.rng_seed, in.options.offset_variant));
  if (id == "s11") return wrap(s11_script(in.horizon));
  if (id == "s12") return wrap(s12_script(known_schedule(in, "s12")));
  if (id == "s13") return wrap(s13_script(known_schedule(in, "s13")));
  if (id == "s14") return wrap(s14_script(known_schedule(in, "s14")));
  if (id == "s15") return std::make_unique<Exp3Strategy>(known_fixed_eps(in, "s15"), in.horizon, in.rng_seed);
  throw std::logic_error("strategy '" + std::string(id) + "' has no factory");
}

}  // namespace driftprice
