#pragma once

// Domain types and loss arithmetic for repeated posted-price selling against
// a buyer whose value v_t drifts by at most eps_t per step.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace driftprice {

// Slack admitted when comparing a realized step |v_{t+1} - v_t| against its
// rate. Step sizes such as 0.05 are not representable, so j*eps - (j-1)*eps
// can exceed eps by an ulp.
inline constexpr double kRateSlack = 1e-12;

class RateViolation : public std::runtime_error {
 public:
  RateViolation(std::int64_t t, double step, double rate)
      : std::runtime_error("rate constraint violated at t=" + std::to_string(t) +
                           ": |v_{t+1} - v_t| = " + std::to_string(step) +
                           " > eps_t = " + std::to_string(rate)),
        t_(t) {}

  /// 1-based index t of the violating transition v_t -> v_{t+1}.
  std::int64_t index() const noexcept { return t_; }

 private:
  std::int64_t t_;
};

inline bool in_unit_range(double x) noexcept { return x >= 0.0 && x <= 1.0; }

inline double clamp01(double x) noexcept { return std::clamp(x, 0.0, 1.0); }

/// Nearest integer, at least 1. Phase lengths, arm counts and thresholds
/// derived from real formulas go through this.
inline std::int64_t round_count(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite count");
  return std::max<std::int64_t>(1, std::llround(x));
}

inline void require_unit(double x, const char* what) {
  if (!in_unit_range(x)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1], got " + std::to_string(x));
  }
}

/// Number of rounds T in an episode.
class Horizon {
 public:
  explicit Horizon(std::int64_t steps) : steps_(steps) {
    if (steps < 2) throw std::invalid_argument("horizon must have T >= 2");
  }
  std::int64_t steps() const noexcept { return steps_; }
  double as_double() const noexcept { return static_cast<double>(steps_); }
  friend bool operator==(Horizon, Horizon) = default;

 private:
  std::int64_t steps_;
};

/// Per-step drift bounds eps_1..eps_{T-1}.
class RateSchedule {
 public:
  explicit RateSchedule(std::vector<double> eps) : eps_(std::move(eps)) {
    if (eps_.empty()) throw std::invalid_argument("rate schedule needs at least one entry (T >= 2)");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < eps_.size(); ++i) {
      const double e = eps_[i];
      if (!(e >= 0.0 && e <= 1.0)) {
        throw std::invalid_argument("rate eps_" + std::to_string(i + 1) + " outside [0,1]");
      }
      sum += e;
      sum_sq += e * e;
    }
    avg_ = sum / static_cast<double>(eps_.size());
    quad_mean_ = std::sqrt(sum_sq / static_cast<double>(eps_.size() + 1));
  }

  static RateSchedule constant(double eps, Horizon horizon) {
    return RateSchedule(std::vector<double>(static_cast<std::size_t>(horizon.steps() - 1), eps));
  }

  Horizon horizon() const { return Horizon(static_cast<std::int64_t>(eps_.size()) + 1); }
  std::span<const double> rates() const noexcept { return eps_; }

  /// eps_t for 1 <= t <= T-1; zero past the last transition.
  double at(std::int64_t t) const noexcept {
    return (t >= 1 && t <= static_cast<std::int64_t>(eps_.size())) ? eps_[static_cast<std::size_t>(t - 1)] : 0.0;
  }

  /// Arithmetic mean over the T-1 transitions.
  double average() const noexcept { return avg_; }
  /// sqrt((1/T) * sum eps_t^2).
  double quadratic_mean() const noexcept { return quad_mean_; }
  double max_rate() const noexcept { return *std::max_element(eps_.begin(), eps_.end()); }

  bool is_constant() const noexcept {
    return std::all_of(eps_.begin(), eps_.end(), [&](double e) { return e == eps_.front(); });
  }

  friend bool operator==(const RateSchedule& a, const RateSchedule& b) { return a.eps_ == b.eps_; }

 private:
  std::vector<double> eps_;
  double avg_ = 0.0;
  double quad_mean_ = 0.0;
};

/// The seller's belief [lo, hi] about the current value.
class Interval {
 public:
  Interval() = default;
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) {
      throw std::invalid_argument("confidence interval requires 0 <= lo <= hi <= 1");
    }
  }

  static Interval unit() noexcept { return Interval(); }

  /// Clamp arbitrary endpoints into [0,1]; lo > hi collapses to a point.
  static Interval clamped(double lo, double hi) noexcept {
    Interval iv;
    iv.lo_ = clamp01(lo);
    iv.hi_ = clamp01(hi);
    if (iv.lo_ > iv.hi_) iv.lo_ = iv.hi_;
    return iv;
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  double midpoint() const noexcept { return (lo_ + hi_) / 2.0; }
  bool contains(double v) const noexcept { return lo_ <= v && v <= hi_; }
  Interval expanded(double margin) const noexcept { return clamped(lo_ - margin, hi_ + margin); }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
};

/// What a posted price was for, as reported by the strategy.
enum class PriceRole : std::uint8_t {
  bisect,      // midpoint of the interval during a search
  exploit,     // revenue-collecting price at or below the interval
  low_probe,   // probe at the bottom of the interval
  high_probe,  // probe above the top of the interval
  midpoint,    // halving query closing a probe round
  check,       // randomly placed checking step at the top of the interval
  arm,         // bandit arm price
};

inline constexpr std::string_view to_string(PriceRole role) noexcept {
  switch (role) {
    case PriceRole::bisect: return "bisect";
    case PriceRole::exploit: return "exploit";
    case PriceRole::low_probe: return "low_probe";
    case PriceRole::high_probe: return "high_probe";
    case PriceRole::midpoint: return "midpoint";
    case PriceRole::check: return "check";
    case PriceRole::arm: return "arm";
  }
  return "unknown";
}

inline PriceRole price_role_from_string(std::string_view s) {
  for (auto r : {PriceRole::bisect, PriceRole::exploit, PriceRole::low_probe, PriceRole::high_probe,
                 PriceRole::midpoint, PriceRole::check, PriceRole::arm}) {
    if (to_string(r) == s) return r;
  }
  throw std::invalid_argument("unknown price role '" + std::string(s) + "'");
}

/// Strategy-side snapshot recorded alongside a step.
struct StepAnnotation {
  Interval interval;
  /// The strategy asserts interval contains v_t (checked by the oracle audit).
  bool asserted = false;
  std::optional<double> eps_hat;
  PriceRole role = PriceRole::bisect;

  friend bool operator==(const StepAnnotation&, const StepAnnotation&) = default;
};

struct StepRecord {
  std::int64_t t = 0;
  double value = 0.0;
  double price = 0.0;
  bool sold = false;
  std::optional<StepAnnotation> note;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// 1 iff the buyer can afford the price; price == value is a sale.
inline bool feedback(double value, double price) {
  require_unit(value, "value");
  require_unit(price, "price");
  return price <= value;
}

inline double revenue_loss_step(double value, double price) {
  return feedback(value, price) ? value - price : value;
}

inline double symmetric_loss_step(double value, double price) {
  require_unit(value, "value");
  require_unit(price, "price");
  return std::abs(value - price);
}

/// First index t with |v_{t+1} - v_t| > eps_t (+ slack), if any.
inline std::optional<std::int64_t> first_rate_violation(std::span<const double> values,
                                                        std::span<const double> rates) {
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double rate = i < rates.size() ? rates[i] : 0.0;
    if (std::abs(values[i + 1] - values[i]) > rate + kRateSlack) return static_cast<std::int64_t>(i + 1);
  }
  return std::nullopt;
}

/// Full record of one seller-buyer interaction. Invariants are checked on
/// construction.
class EpisodeTrace {
 public:
  EpisodeTrace(Horizon horizon, RateSchedule schedule, std::vector<StepRecord> steps, std::uint64_t seed)
      : horizon_(horizon), schedule_(std::move(schedule)), steps_(std::move(steps)), seed_(seed) {
    if (schedule_.horizon() != horizon_) throw std::invalid_argument("schedule length does not match horizon");
    if (static_cast<std::int64_t>(steps_.size()) != horizon_.steps()) {
      throw std::invalid_argument("trace must contain exactly T steps");
    }
    std::vector<double> values;
    values.reserve(steps_.size());
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      const StepRecord& s = steps_[i];
      if (s.t != static_cast<std::int64_t>(i + 1)) throw std::invalid_argument("step indices must run 1..T");
      if (s.sold != feedback(s.value, s.price)) {
        throw std::invalid_argument("step " + std::to_string(s.t) + ": sold flag disagrees with price <= value");
      }
      values.push_back(s.value);
    }
    if (auto bad = first_rate_violation(values, schedule_.rates())) {
      const auto i = static_cast<std::size_t>(*bad - 1);
      throw RateViolation(*bad, std::abs(values[i + 1] - values[i]), schedule_.at(*bad));
    }
  }

  Horizon horizon() const noexcept { return horizon_; }
  const RateSchedule& schedule() const noexcept { return schedule_; }
  std::span<const StepRecord> steps() const noexcept { return steps_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(steps_.size());
    for (const auto& s : steps_) out.push_back(s.value);
    return out;
  }
  std::vector<double> prices() const {
    std::vector<double> out;
    out.reserve(steps_.size());
    for (const auto& s : steps_) out.push_back(s.price);
    return out;
  }

  friend bool operator==(const EpisodeTrace& a, const EpisodeTrace& b) {
    return a.horizon_ == b.horizon_ && a.schedule_ == b.schedule_ && a.steps_ == b.steps_ && a.seed_ == b.seed_;
  }

 private:
  Horizon horizon_;
  RateSchedule schedule_;
  std::vector<StepRecord> steps_;
  std::uint64_t seed_;
};

struct LossSummary {
  std::int64_t steps = 0;
  double total_revenue = 0.0;       // sum p_t * sigma_t
  double opt = 0.0;                 // sum v_t
  double avg_revenue_loss = 0.0;    // (opt - total_revenue) / T
  double avg_symmetric_loss = 0.0;  // (1/T) sum |v_t - p_t|

  friend bool operator==(const LossSummary&, const LossSummary&) = default;
};

enum class LossMetric : std::uint8_t { revenue, symmetric };

inline constexpr std::string_view to_string(LossMetric m) noexcept {
  return m == LossMetric::revenue ? "revenue" : "symmetric";
}

inline double select_loss(const LossSummary& s, LossMetric m) noexcept {
  return m == LossMetric::revenue ? s.avg_revenue_loss : s.avg_symmetric_loss;
}

inline LossSummary summarize(std::span<const StepRecord> steps) {
  if (steps.empty()) throw std::invalid_argument("cannot summarize an empty trace");
  LossSummary out;
  double symmetric = 0.0;
  for (const StepRecord& s : steps) {
    out.total_revenue += s.sold ? s.price : 0.0;
    out.opt += s.value;
    symmetric += symmetric_loss_step(s.value, s.price);
  }
  out.steps = static_cast<std::int64_t>(steps.size());
  const double n = static_cast<double>(steps.size());
  out.avg_revenue_loss = (out.opt - out.total_revenue) / n;
  out.avg_symmetric_loss = symmetric / n;
  return out;
}

inline LossSummary summarize(const EpisodeTrace& trace) { return summarize(trace.steps()); }

}  // namespace driftprice
