#pragma once

// Strategies that are told the rate: a single eps (s1-s4) or the whole
// schedule eps_1..eps_{T-1} (s12-s14).

#include <cmath>
#include <cstdint>

#include "driftprice/strategy.hpp"

namespace driftprice {

/// Rates below 1/T are raised to 1/T; the loss bound is o(1) either way.
inline double effective_rate(double eps, Horizon horizon) { return std::max(eps, 1.0 / horizon.as_double()); }

/// Exploitation steps per phase: round(eps^{-1/2}) for s3, round(eps^{-2/3}) for s4.
inline std::int64_t adversarial_phase_length(double eps) { return round_count(1.0 / std::sqrt(eps)); }
inline std::int64_t stochastic_phase_length(double eps) { return round_count(std::pow(eps, -2.0 / 3.0)); }

/// s4's price offset below the located interval.
inline double known_stochastic_offset(double eps) {
  return 4.0 * std::cbrt(eps * eps) * std::sqrt(std::log(1.0 / eps));
}

/// s1: bisection on a confidence interval widened by eps after every step.
inline PriceScript s1_script(double eps) {
  Interval iv = Interval::unit();
  for (;;) {
    const double p = iv.midpoint();
    const bool sold = co_yield Quote{p, PriceRole::bisect, iv, true, std::nullopt};
    iv = bisect_update(iv, p, sold, eps);
  }
}

/// s2 run on its own: locate, widen by eps, locate again. Every round makes
/// at least one probe.
inline PriceScript s2_script(double eps) {
  Interval iv = Interval::unit();
  for (;;) {
    Locator loc(iv, 0.0);
    do {
      const double p = loc.price();
      const bool sold = co_yield Quote{p, PriceRole::bisect, loc.interval(), true, std::nullopt};
      loc.observe(sold, eps);
    } while (!loc.done(eps));
    iv = loc.finish(eps);
  }
}

/// s3: phases of round(eps^{-1/2}) steps priced at the bottom of an interval
/// that was located to width sqrt(eps) and then widens by eps per step.
inline PriceScript s3_script(double eps_given, Horizon horizon) {
  const double eps = effective_rate(eps_given, horizon);
  const std::int64_t m = adversarial_phase_length(eps);
  const double target = std::sqrt(eps);
  Interval iv = Interval::unit();
  for (;;) {
    Locator loc(iv, target);
    while (!loc.done(eps)) {
      const double p = loc.price();
      const bool sold = co_yield Quote{p, PriceRole::bisect, loc.interval(), true, std::nullopt};
      loc.observe(sold, eps);
    }
    iv = loc.finish(eps);
    for (std::int64_t i = 0; i < m; ++i) {
      co_yield Quote{iv.lo(), PriceRole::exploit, iv, true, std::nullopt};
      iv = iv.expanded(eps);
    }
  }
}

/// s4: locate to width 6 eps, then hold one price lo - delta for
/// round(eps^{-2/3}) steps. The recorded interval is the worst case
/// (widened by eps per step), so it always contains v.
inline PriceScript s4_script(double eps_given, Horizon horizon) {
  const double eps = effective_rate(eps_given, horizon);
  const std::int64_t m = stochastic_phase_length(eps);
  const double delta = known_stochastic_offset(eps);
  Interval iv = Interval::unit();
  for (;;) {
    Locator loc(iv, 6.0 * eps);
    while (!loc.done(eps)) {
      const double p = loc.price();
      const bool sold = co_yield Quote{p, PriceRole::bisect, loc.interval(), true, std::nullopt};
      loc.observe(sold, eps);
    }
    iv = loc.finish(eps);
    const double p = clamp01(iv.lo() - delta);
    for (std::int64_t i = 0; i < m; ++i) {
      co_yield Quote{p, PriceRole::exploit, iv, true, std::nullopt};
      iv = iv.expanded(eps);
    }
  }
}

/// s12: s1 with the per-step rate eps_t.
inline PriceScript s12_script(RateSchedule schedule) {
  Interval iv = Interval::unit();
  for (std::int64_t t = 1;; ++t) {
    const double p = iv.midpoint();
    const bool sold = co_yield Quote{p, PriceRole::bisect, iv, true, std::nullopt};
    iv = bisect_update(iv, p, sold, schedule.at(t));
  }
}

/// s13: s3 with phases cut where the accumulated rate first exceeds
/// sqrt(eps_bar).
inline PriceScript s13_script(RateSchedule schedule) {
  const double eps_bar = effective_rate(schedule.average(), schedule.horizon());
  const double budget = std::sqrt(eps_bar);
  Interval iv = Interval::unit();
  std::int64_t t = 1;
  for (;;) {
    Locator loc(iv, budget);
    while (!loc.done(schedule.at(t))) {
      const double p = loc.price();
      const bool sold = co_yield Quote{p, PriceRole::bisect, loc.interval(), true, std::nullopt};
      loc.observe(sold, schedule.at(t));
      ++t;
    }
    iv = loc.finish(schedule.at(t));
    const std::int64_t m = budget_phase_length(schedule, t, budget, 1.0);
    for (std::int64_t i = 0; i < m; ++i) {
      co_yield Quote{iv.lo(), PriceRole::exploit, iv, true, std::nullopt};
      iv = iv.expanded(schedule.at(t));
      ++t;
    }
  }
}

/// s14: s4 with phases cut where the accumulated squared rate first exceeds
/// eps_tilde^{4/3}.
inline PriceScript s14_script(RateSchedule schedule) {
  const Horizon horizon = schedule.horizon();
  const double eps_tilde = effective_rate(schedule.quadratic_mean(), horizon);
  const double e23 = std::cbrt(eps_tilde * eps_tilde);
  const double budget = e23 * e23;
  const double delta = 4.0 * e23 * std::sqrt(std::log(horizon.as_double()));
  Interval iv = Interval::unit();
  std::int64_t t = 1;
  for (;;) {
    Locator loc(iv, 4.0 * e23);
    while (!loc.done(schedule.at(t))) {
      const double p = loc.price();
      const bool sold = co_yield Quote{p, PriceRole::bisect, loc.interval(), true, std::nullopt};
      loc.observe(sold, schedule.at(t));
      ++t;
    }
    iv = loc.finish(schedule.at(t));
    const double p = clamp01(iv.lo() - delta);
    const std::int64_t m = budget_phase_length(schedule, t, budget, 2.0);
    for (std::int64_t i = 0; i < m; ++i) {
      co_yield Quote{p, PriceRole::exploit, iv, true, std::nullopt};
      iv = iv.expanded(schedule.at(t));
      ++t;
    }
  }
}

}  // namespace driftprice
