#pragma once

// Strategies that are not told the rate. They keep a guess eps_hat and move
// it by factors of two on evidence. s5-s7 assume a fixed rate, s8-s10 a
// non-increasing one, s11 nothing at all.

#include <cmath>
#include <cstdint>
#include <optional>

#include "driftprice/random.hpp"
#include "driftprice/strategy.hpp"

namespace driftprice {

inline constexpr double kTerminalEpsHat = 0.5;

namespace detail {

/// A high-side test at a price >= 1 says nothing, since v <= 1 is known.
inline bool high_side_violation(bool sold, double price) { return sold && price < 1.0; }

/// Re-derive an interval after evidence against the current one: the last
/// trusted interval widened by the elapsed steps at the new guess, or the
/// whole range when there is none.
inline Interval rebuild(const std::optional<Interval>& anchor, std::int64_t anchor_t, std::int64_t now,
                        double eps_hat) {
  if (!anchor) return Interval::unit();
  return anchor->expanded(static_cast<double>(now - anchor_t) * eps_hat);
}

/// Three-step round shared by s5 and s8: bottom of the interval, just above
/// the top, then the midpoint.
struct ProbeRound {
  Interval start;
  double low = 0.0;
  double high = 0.0;
  double mid = 0.0;

  ProbeRound(const Interval& iv, double eps_hat)
      : start(iv), low(iv.lo()), high(std::min(1.0, iv.hi() + eps_hat)), mid(iv.midpoint()) {}

  static bool bad(bool sold_low, bool sold_high, double high_price) {
    return !sold_low || high_side_violation(sold_high, high_price);
  }

  Interval good_update(bool sold_mid, double eps_hat) const {
    return sold_mid ? Interval::clamped(mid - eps_hat, start.hi() + 3.0 * eps_hat)
                    : Interval::clamped(start.lo() - 3.0 * eps_hat, mid + eps_hat);
  }
};

}  // namespace detail

/// s5: probe rounds with eps_hat starting at 1/T and doubling on bad
/// evidence; plain bisection at eps_hat = 1/2 once the guess reaches 1/2.
inline PriceScript s5_script(Horizon horizon) {
  double eps_hat = 1.0 / horizon.as_double();
  Interval iv = Interval::unit();
  std::optional<Interval> anchor;
  std::int64_t anchor_t = 1;
  bool trusted = true;
  std::int64_t t = 1;
  while (eps_hat < kTerminalEpsHat) {
    const detail::ProbeRound round(iv, eps_hat);
    const std::int64_t t0 = t;
    const bool s_low = co_yield Quote{round.low, PriceRole::low_probe, iv, trusted, eps_hat};
    const bool s_high = co_yield Quote{round.high, PriceRole::high_probe, iv, false, eps_hat};
    const bool s_mid = co_yield Quote{round.mid, PriceRole::midpoint, iv, false, eps_hat};
    t += 3;
    if (detail::ProbeRound::bad(s_low, s_high, round.high)) {
      eps_hat *= 2.0;
      iv = detail::rebuild(anchor, anchor_t, t, eps_hat);
      trusted = false;
    } else {
      anchor = round.start;
      anchor_t = t0;
      iv = round.good_update(s_mid, eps_hat);
      trusted = true;
    }
  }
  eps_hat = kTerminalEpsHat;
  for (;;) {
    const double p = iv.midpoint();
    const bool sold = co_yield Quote{p, PriceRole::bisect, iv, false, eps_hat};
    iv = bisect_update(iv, p, sold, eps_hat);
  }
}

/// s6: phases of round(eps_hat^{-1/2}) steps priced at the interval bottom
/// with one randomly placed check at the top.
inline PriceScript s6_script(Horizon horizon, std::uint64_t seed) {
  Rng rng(seed);
  double eps_hat = 1.0 / horizon.as_double();
  Interval iv = Interval::unit();
  std::int64_t t = 1;
  for (;;) {
    Locator loc(iv, std::sqrt(eps_hat));
    while (!loc.done(eps_hat)) {
      const double p = loc.price();
      const bool sold = co_yield Quote{p, PriceRole::bisect, loc.interval(), false, eps_hat};
      loc.observe(sold, eps_hat);
      ++t;
    }
    iv = loc.finish(eps_hat);
    const Interval anchor = iv;
    const std::int64_t anchor_t = t;
    const std::int64_t m = round_count(1.0 / std::sqrt(eps_hat));
    const auto t_star = static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(m)));
    for (std::int64_t i = 0; i < m; ++i) {
      const bool check = i == t_star;
      const double p = check ? iv.hi() : iv.lo();
      const bool sold = co_yield Quote{p, check ? PriceRole::check : PriceRole::exploit, iv, false, eps_hat};
      ++t;
      const bool violated = check ? detail::high_side_violation(sold, p) : !sold;
      if (violated && eps_hat < kTerminalEpsHat) {
        eps_hat = std::min(2.0 * eps_hat, kTerminalEpsHat);
        iv = anchor.expanded(static_cast<double>(t - anchor_t) * eps_hat);
        break;
      }
      iv = iv.expanded(eps_hat);
    }
  }
}

/// s7: phases of round(eps_hat^{-2/3}) steps at the fixed price lo - delta,
/// with one randomly placed check at hi + delta.
inline PriceScript s7_script(Horizon horizon, std::uint64_t seed, OffsetVariant variant) {
  Rng rng(seed);
  double eps_hat = 1.0 / horizon.as_double();
  Interval iv = Interval::unit();
  std::int64_t t = 1;
  std::int64_t bad_events = 0;
  std::int64_t steps_at_guess = 0;
  for (;;) {
    Locator loc(iv, std::sqrt(eps_hat));
    while (!loc.done(eps_hat)) {
      const double p = loc.price();
      const bool sold = co_yield Quote{p, PriceRole::bisect, loc.interval(), false, eps_hat};
      loc.observe(sold, eps_hat);
      ++t;
      ++steps_at_guess;
    }
    iv = loc.finish(eps_hat);
    const Interval anchor = iv;
    const std::int64_t anchor_t = t;
    const std::int64_t m = round_count(std::pow(eps_hat, -2.0 / 3.0));
    const double delta = stochastic_offset(eps_hat, horizon, variant);
    const double low_price = clamp01(iv.lo() - delta);
    const double high_price = clamp01(iv.hi() + delta);
    const auto t_star = static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(m)));
    for (std::int64_t i = 0; i < m; ++i) {
      const bool check = i == t_star;
      const double p = check ? high_price : low_price;
      const bool sold = co_yield Quote{p, check ? PriceRole::check : PriceRole::exploit, iv, false, eps_hat};
      ++t;
      ++steps_at_guess;
      const bool violated = check ? detail::high_side_violation(sold, p) : !sold;
      if (!violated || eps_hat >= kTerminalEpsHat) continue;
      bool escalate = true;
      if (variant == OffsetVariant::polylog) {
        ++bad_events;
        escalate = static_cast<double>(bad_events) > static_cast<double>(steps_at_guess) / static_cast<double>(m * m);
      }
      if (escalate) {
        eps_hat = std::min(2.0 * eps_hat, kTerminalEpsHat);
        bad_events = 0;
        steps_at_guess = 0;
        break;
      }
    }
    iv = anchor.expanded(static_cast<double>(t - anchor_t) * eps_hat);
  }
}

/// Rounds s8 spends at one guess before halving it: (log2 T)^3.
inline double halving_threshold(Horizon horizon) { return std::pow(std::log2(horizon.as_double()), 3); }

/// s8: s5's probe rounds with eps_hat starting at 1/2, halved after more than
/// (log2 T)^3 rounds at the same guess and doubled on bad evidence.
inline PriceScript s8_script(Horizon horizon) {
  const double floor_eps = 1.0 / horizon.as_double();
  const double threshold = halving_threshold(horizon);
  double eps_hat = 0.5;
  Interval iv = Interval::unit();
  std::optional<Interval> anchor;
  std::int64_t anchor_t = 1;
  std::int64_t rounds_at_guess = 0;
  bool trusted = true;
  std::int64_t t = 1;
  for (;;) {
    ++rounds_at_guess;
    const detail::ProbeRound round(iv, eps_hat);
    const std::int64_t t0 = t;
    const bool s_low = co_yield Quote{round.low, PriceRole::low_probe, iv, trusted, eps_hat};
    const bool s_high = co_yield Quote{round.high, PriceRole::high_probe, iv, false, eps_hat};
    const bool s_mid = co_yield Quote{round.mid, PriceRole::midpoint, iv, false, eps_hat};
    t += 3;
    if (detail::ProbeRound::bad(s_low, s_high, round.high)) {
      eps_hat = std::min(2.0 * eps_hat, 1.0);
      rounds_at_guess = 0;
      iv = detail::rebuild(anchor, anchor_t, t, eps_hat);
      trusted = false;
    } else {
      anchor = round.start;
      anchor_t = t0;
      iv = round.good_update(s_mid, eps_hat);
      trusted = true;
      if (static_cast<double>(rounds_at_guess) > threshold && eps_hat > floor_eps) {
        eps_hat = std::max(eps_hat / 2.0, floor_eps);
        rounds_at_guess = 0;
      }
    }
  }
}

namespace detail {

/// Shape of one block of s9/s10: `phases` phases of `length` exploitation
/// steps each.
struct BlockShape {
  std::int64_t phases;
  std::int64_t length;
};

inline BlockShape block_shape(double eps_hat, double exponent) {
  const std::int64_t n = round_count(std::pow(eps_hat, -exponent));
  return {n, n};
}

}  // namespace detail

/// s9: blocks of round(eps_hat^{-1/2}) s6-style phases; a violation doubles
/// eps_hat and restarts the block, a clean block halves it.
inline PriceScript s9_script(Horizon horizon, std::uint64_t seed) {
  Rng rng(seed);
  const double floor_eps = 1.0 / horizon.as_double();
  double eps_hat = 0.5;
  Interval iv = Interval::unit();
  std::int64_t t = 1;
  for (;;) {
    const detail::BlockShape shape = detail::block_shape(eps_hat, 0.5);
    bool violated = false;
    for (std::int64_t b = 0; b < shape.phases && !violated; ++b) {
      Locator loc(iv, std::sqrt(eps_hat));
      while (!loc.done(eps_hat)) {
        const double p = loc.price();
        const bool sold = co_yield Quote{p, PriceRole::bisect, loc.interval(), false, eps_hat};
        loc.observe(sold, eps_hat);
        ++t;
      }
      iv = loc.finish(eps_hat);
      const Interval anchor = iv;
      const std::int64_t anchor_t = t;
      const auto t_star = static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(shape.length)));
      for (std::int64_t i = 0; i < shape.length; ++i) {
        const bool check = i == t_star;
        const double p = check ? iv.hi() : iv.lo();
        const bool sold = co_yield Quote{p, check ? PriceRole::check : PriceRole::exploit, iv, false, eps_hat};
        ++t;
        if (check ? detail::high_side_violation(sold, p) : !sold) {
          eps_hat = std::min(2.0 * eps_hat, kTerminalEpsHat);
          iv = anchor.expanded(static_cast<double>(t - anchor_t) * eps_hat);
          violated = true;
          break;
        }
        iv = iv.expanded(eps_hat);
      }
    }
    if (!violated && eps_hat > floor_eps) eps_hat = std::max(eps_hat / 2.0, floor_eps);
  }
}

/// s10: s9's block structure with round(eps_hat^{-2/3}) phases of that length
/// and s7's offset prices.
inline PriceScript s10_script(Horizon horizon, std::uint64_t seed, OffsetVariant variant) {
  Rng rng(seed);
  const double floor_eps = 1.0 / horizon.as_double();
  double eps_hat = 0.5;
  Interval iv = Interval::unit();
  std::int64_t t = 1;
  for (;;) {
    const detail::BlockShape shape = detail::block_shape(eps_hat, 2.0 / 3.0);
    const double delta = stochastic_offset(eps_hat, horizon, variant);
    bool violated = false;
    for (std::int64_t b = 0; b < shape.phases && !violated; ++b) {
      Locator loc(iv, std::sqrt(eps_hat));
      while (!loc.done(eps_hat)) {
        const double p = loc.price();
        const bool sold = co_yield Quote{p, PriceRole::bisect, loc.interval(), false, eps_hat};
        loc.observe(sold, eps_hat);
        ++t;
      }
      iv = loc.finish(eps_hat);
      const Interval anchor = iv;
      const std::int64_t anchor_t = t;
      const double low_price = clamp01(iv.lo() - delta);
      const double high_price = clamp01(iv.hi() + delta);
      const auto t_star = static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(shape.length)));
      for (std::int64_t i = 0; i < shape.length; ++i) {
        const bool check = i == t_star;
        const double p = check ? high_price : low_price;
        const bool sold = co_yield Quote{p, check ? PriceRole::check : PriceRole::exploit, iv, false, eps_hat};
        ++t;
        if (check ? detail::high_side_violation(sold, p) : !sold) {
          eps_hat = std::min(2.0 * eps_hat, kTerminalEpsHat);
          violated = true;
          break;
        }
      }
      iv = anchor.expanded(static_cast<double>(t - anchor_t) * eps_hat);
    }
    if (!violated && eps_hat > floor_eps) eps_hat = std::max(eps_hat / 2.0, floor_eps);
  }
}

/// Largest probe index for s11 on a horizon of T steps; beyond it every
/// probe is clamped to 0 or 1.
inline std::int64_t probe_cap(Horizon horizon) {
  return static_cast<std::int64_t>(std::ceil(std::log2(2.0 * horizon.as_double())));
}

/// s11: from [lo, hi] probe lo - 2^j/T and hi + 2^j/T for j = 0, 1, ...
/// until the value is bracketed, then halve at the midpoint.
inline PriceScript s11_script(Horizon horizon) {
  const double inv_t = 1.0 / horizon.as_double();
  const std::int64_t cap = probe_cap(horizon);
  Interval iv = Interval::unit();
  for (;;) {
    double delta = inv_t;
    for (std::int64_t j = 0;; ++j) {
      delta = std::ldexp(inv_t, static_cast<int>(j));
      const double low = clamp01(iv.lo() - delta);
      const bool s_low = co_yield Quote{low, PriceRole::low_probe, iv, false, delta};
      const double high = clamp01(iv.hi() + delta);
      const bool s_high = co_yield Quote{high, PriceRole::high_probe, iv, false, delta};
      if ((s_low && !detail::high_side_violation(s_high, high)) || j >= cap) break;
    }
    const double mid = iv.midpoint();
    const bool s_mid = co_yield Quote{mid, PriceRole::midpoint, iv, false, delta};
    iv = s_mid ? Interval::clamped(mid, iv.hi() + delta) : Interval::clamped(iv.lo() - delta, mid);
  }
}

}  // namespace driftprice
