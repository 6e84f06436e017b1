#pragma once

// Strategy contract and the shared machinery behind the pricing state
// machines: the coroutine driver, what the seller knows about the rate, and
// the bisection/locate helpers.

#include <coroutine>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>

#include "driftprice/core.hpp"

namespace driftprice {

/// One posted price plus the strategy's own view of the step.
struct Quote {
  double price = 0.5;
  PriceRole role = PriceRole::bisect;
  std::optional<Interval> interval;
  bool asserted = false;
  std::optional<double> eps_hat;

  std::optional<StepAnnotation> annotation() const {
    if (!interval) return std::nullopt;
    return StepAnnotation{*interval, asserted, eps_hat, role};
  }
};

/// A seller. It sees the horizon and what it was told about the rate at
/// construction, then only the sale bits.
class PricingStrategy {
 public:
  virtual ~PricingStrategy() = default;
  /// The quote for the current round.
  virtual const Quote& quote() const = 0;
  /// Deliver sigma_t and advance to the next round.
  virtual void observe(bool sold) = 0;

  double next_price() const { return quote().price; }
};

// ---------------------------------------------------------------------------
// Coroutine driver. A script is written as a loop of
//   bool sold = co_yield Quote{...};
// and never returns.

class PriceScript {
 public:
  struct promise_type {
    Quote current;
    bool sold = false;
    std::exception_ptr error;

    PriceScript get_return_object() {
      return PriceScript(std::coroutine_handle<promise_type>::from_promise(*this));
    }
    std::suspend_always initial_suspend() noexcept { return {}; }
    std::suspend_always final_suspend() noexcept { return {}; }
    void return_void() noexcept {}
    void unhandled_exception() noexcept { error = std::current_exception(); }

    auto yield_value(Quote q) noexcept {
      current = std::move(q);
      struct SoldAwaiter {
        promise_type* self;
        bool await_ready() const noexcept { return false; }
        void await_suspend(std::coroutine_handle<>) const noexcept {}
        bool await_resume() const noexcept { return self->sold; }
      };
      return SoldAwaiter{this};
    }
  };

  PriceScript(PriceScript&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
  PriceScript& operator=(PriceScript&& other) noexcept {
    if (this != &other) {
      if (handle_) handle_.destroy();
      handle_ = std::exchange(other.handle_, {});
    }
    return *this;
  }
  PriceScript(const PriceScript&) = delete;
  PriceScript& operator=(const PriceScript&) = delete;
  ~PriceScript() {
    if (handle_) handle_.destroy();
  }

  /// Run to the next co_yield, feeding `sold` as the result of the previous one.
  void advance(bool sold) {
    handle_.promise().sold = sold;
    handle_.resume();
    if (handle_.done()) {
      if (auto e = handle_.promise().error) std::rethrow_exception(e);
      throw std::logic_error("pricing script ended before the horizon");
    }
  }
  const Quote& current() const { return handle_.promise().current; }

 private:
  explicit PriceScript(std::coroutine_handle<promise_type> h) : handle_(h) {}
  std::coroutine_handle<promise_type> handle_;
};

class CoroutineStrategy : public PricingStrategy {
 public:
  explicit CoroutineStrategy(PriceScript script) : script_(std::move(script)) { script_.advance(false); }
  const Quote& quote() const override { return script_.current(); }
  void observe(bool sold) override { script_.advance(sold); }

 private:
  PriceScript script_;
};

// ---------------------------------------------------------------------------
// What the seller is told

struct KnownFixed {
  double eps;
};
struct KnownDynamic {
  RateSchedule schedule;
};
struct Unknown {};

using Knowledge = std::variant<KnownFixed, KnownDynamic, Unknown>;

enum class OffsetVariant : std::uint8_t {
  standard,  // delta = 4 eps_hat^{2/3} sqrt(ln T), double on first violation
  polylog,   // delta = 4 eps_hat^{2/3} ln^4(1/eps_hat), double on frequent violations
  literal,   // delta = 4 eps_hat^{-2/3} sqrt(ln T); debugging only
};

struct StrategyOptions {
  OffsetVariant offset_variant = OffsetVariant::standard;
};

struct StrategyInput {
  Horizon horizon;
  Knowledge knowledge = Unknown{};
  std::uint64_t rng_seed = 0;
  StrategyOptions options{};
};

inline double known_fixed_eps(const StrategyInput& in, const char* who) {
  if (const auto* k = std::get_if<KnownFixed>(&in.knowledge)) {
    if (!(k->eps >= 0.0 && k->eps <= 1.0)) throw std::invalid_argument(std::string(who) + ": eps must lie in [0,1]");
    return k->eps;
  }
  throw std::invalid_argument(std::string(who) + " needs a known fixed rate");
}

inline const RateSchedule& known_schedule(const StrategyInput& in, const char* who) {
  if (const auto* k = std::get_if<KnownDynamic>(&in.knowledge)) {
    if (k->schedule.horizon() != in.horizon) {
      throw std::invalid_argument(std::string(who) + ": schedule length does not match the horizon");
    }
    return k->schedule;
  }
  throw std::invalid_argument(std::string(who) + " needs the full rate schedule");
}

// ---------------------------------------------------------------------------
// Interval helpers

/// Binary-search update after posting p: a sale shows v >= p, a no-sale
/// shows v < p; either way the next value may move by `rate`.
inline Interval bisect_update(const Interval& iv, double p, bool sold, double rate) {
  return sold ? Interval::clamped(p - rate, iv.hi() + rate) : Interval::clamped(iv.lo() - rate, p + rate);
}

/// Bisection until the interval is narrower than max(target, 6*rate).
/// Under a rate bound r the width obeys w <- w/2 + 2r, whose fixed point 4r is
/// never reached, so the stop threshold sits at 6r; a step cap guarantees
/// termination when the true rate exceeds the one used for the updates.
class Locator {
 public:
  static constexpr int kMaxSteps = 64;

  Locator(Interval start, double target) : iv_(start), target_(target) {}

  bool done(double rate) const { return steps_ >= kMaxSteps || iv_.width() < std::max(target_, 6.0 * rate); }
  double price() const { return iv_.midpoint(); }
  const Interval& interval() const { return iv_; }
  int steps() const { return steps_; }

  void observe(bool sold, double rate) {
    iv_ = bisect_update(iv_, price(), sold, rate);
    ++steps_;
  }

  /// The located interval widened by `margin` on both sides.
  Interval finish(double margin) const { return iv_.expanded(margin); }

 private:
  Interval iv_;
  double target_;
  int steps_ = 0;
};

/// Smallest m such that the sum of eps_s^power over s = start_t .. start_t+m-1
/// exceeds `budget`; the rest of the horizon if it never does.
inline std::int64_t budget_phase_length(const RateSchedule& schedule, std::int64_t start_t, double budget,
                                        double power) {
  const std::int64_t last = schedule.horizon().steps();
  double used = 0.0;
  for (std::int64_t s = start_t; s <= last; ++s) {
    used += std::pow(schedule.at(s), power);
    if (used > budget) return s - start_t + 1;
  }
  return std::max<std::int64_t>(1, last - start_t + 1);
}

/// Offsets of the stochastic revenue strategies.
inline double stochastic_offset(double eps_hat, Horizon horizon, OffsetVariant variant) {
  const double log_t = std::log(horizon.as_double());
  switch (variant) {
    case OffsetVariant::standard: return 4.0 * std::cbrt(eps_hat * eps_hat) * std::sqrt(log_t);
    case OffsetVariant::polylog: return 4.0 * std::cbrt(eps_hat * eps_hat) * std::pow(std::log(1.0 / eps_hat), 4);
    case OffsetVariant::literal: return 4.0 / std::cbrt(eps_hat * eps_hat) * std::sqrt(log_t);
  }
  return 0.0;
}

}  // namespace driftprice
