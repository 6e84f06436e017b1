#pragma once

// Reference computations for tests: loss recomputation from raw steps,
// clairvoyant benchmarks, containment audits and the width recursion.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "driftprice/core.hpp"

namespace driftprice::oracle {

/// Loss summary computed straight from (v, p) pairs. Sums run forward, as
/// in summarize, so the two agree bit for bit.
inline LossSummary recompute_losses(std::span<const StepRecord> steps) {
  if (steps.empty()) throw std::invalid_argument("empty trace");
  double first_best = 0.0;
  for (const auto& s : steps) first_best += s.value;
  double revenue = 0.0;
  for (const auto& s : steps) revenue += (s.price <= s.value) ? s.price : 0.0;
  double gap = 0.0;
  for (const auto& s : steps) gap += s.value > s.price ? s.value - s.price : s.price - s.value;
  const double n = static_cast<double>(steps.size());
  LossSummary out;
  out.steps = static_cast<std::int64_t>(steps.size());
  out.total_revenue = revenue;
  out.opt = first_best;
  out.avg_revenue_loss = (first_best - revenue) / n;
  out.avg_symmetric_loss = gap / n;
  return out;
}

struct Benchmarks {
  double first_best = 0.0;           // sum v_t
  double best_fixed_price = 0.0;     // argmax_p p * #{t : p <= v_t}
  double best_fixed_revenue = 0.0;   // the max itself
};

/// Best fixed price over the observed values plus the grid {k*eps}. The
/// revenue of a fixed price is piecewise linear and increasing between
/// observed values, so observed values alone already attain the maximum;
/// the grid is included for comparisons against grid-restricted sellers.
inline Benchmarks clairvoyant_opt(std::span<const double> values, std::optional<double> grid_eps = std::nullopt) {
  Benchmarks out;
  for (double v : values) out.first_best += v;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> candidates = sorted;
  if (grid_eps && *grid_eps > 0.0) {
    const auto k_max = static_cast<std::int64_t>(std::floor(1.0 / *grid_eps));
    for (std::int64_t k = 1; k <= k_max; ++k) candidates.push_back(static_cast<double>(k) * *grid_eps);
  }
  const double n = static_cast<double>(sorted.size());
  for (double p : candidates) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), p) - sorted.begin();
    const double revenue = p * (n - static_cast<double>(below));
    if (revenue > out.best_fixed_revenue) {
      out.best_fixed_revenue = revenue;
      out.best_fixed_price = p;
    }
  }
  return out;
}

inline Benchmarks clairvoyant_opt(const EpisodeTrace& trace, std::optional<double> grid_eps = std::nullopt) {
  const auto values = trace.values();
  return clairvoyant_opt(values, grid_eps);
}

/// Exhaustive scan of fixed prices j/resolution; for small instances only.
inline double brute_force_best_fixed_revenue(std::span<const double> values, std::int64_t resolution) {
  double best = 0.0;
  for (std::int64_t j = 0; j <= resolution; ++j) {
    const double p = static_cast<double>(j) / static_cast<double>(resolution);
    double revenue = 0.0;
    for (double v : values) revenue += p <= v ? p : 0.0;
    best = std::max(best, revenue);
  }
  return best;
}

struct ContainmentViolation {
  std::int64_t t = 0;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Steps where the strategy asserted lo <= v_t <= hi but v_t fell outside.
/// Steps carrying an eps_hat below the largest true rate are skipped, since
/// the strategy's guarantee is conditional on its guess.
inline std::vector<ContainmentViolation> audit_containment(std::span<const StepRecord> steps,
                                                           const RateSchedule& schedule) {
  const double true_rate = schedule.max_rate();
  std::vector<ContainmentViolation> out;
  for (const auto& s : steps) {
    if (!s.note || !s.note->asserted) continue;
    if (s.note->eps_hat && *s.note->eps_hat < true_rate) continue;
    if (!s.note->interval.contains(s.value)) {
      out.push_back({s.t, s.value, s.note->interval.lo(), s.note->interval.hi()});
    }
  }
  return out;
}

inline std::vector<ContainmentViolation> audit_containment(const EpisodeTrace& trace) {
  return audit_containment(trace.steps(), trace.schedule());
}

inline nlohmann::json violations_to_json(const std::vector<ContainmentViolation>& violations) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : violations) arr.push_back({{"t", v.t}, {"v", v.value}, {"lo", v.lo}, {"hi", v.hi}});
  return arr;
}

struct WidthCheck {
  bool passed = true;
  std::optional<std::int64_t> first_failure;  // t with a_{t+1} > a_t/2 + 2 eps_t
  double total_width = 0.0;                    // sum a_t
  double bound = 0.0;                          // 8 sum eps_t + 2 a_1
};

/// For bisection traces: a_{t+1} <= a_t/2 + 2 eps_t at every step and
/// sum a_t <= 8 sum eps_t + 2 a_1 overall.
inline WidthCheck width_recursion_check(std::span<const StepRecord> steps, const RateSchedule& schedule) {
  constexpr double kSlack = 1e-12;
  WidthCheck out;
  if (steps.empty()) return out;
  for (const auto& s : steps) {
    if (!s.note) throw std::invalid_argument("width check needs interval snapshots at every step");
  }
  double eps_sum = 0.0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double a = steps[i].note->interval.width();
    out.total_width += a;
    if (i + 1 < steps.size()) {
      const double eps = schedule.at(steps[i].t);
      eps_sum += eps;
      const double next = steps[i + 1].note->interval.width();
      if (next > a / 2.0 + 2.0 * eps + kSlack && out.passed) {
        out.passed = false;
        out.first_failure = steps[i].t;
      }
    }
  }
  out.bound = 8.0 * eps_sum + 2.0 * steps.front().note->interval.width();
  if (out.total_width > out.bound + kSlack * static_cast<double>(steps.size())) out.passed = false;
  return out;
}

inline WidthCheck width_recursion_check(const EpisodeTrace& trace) {
  return width_recursion_check(trace.steps(), trace.schedule());
}

}  // namespace driftprice::oracle
