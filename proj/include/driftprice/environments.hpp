#pragma once

// Value processes. Every generator honors |v_{t+1} - v_t| <= eps_t.

#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "driftprice/core.hpp"
#include "driftprice/random.hpp"

namespace driftprice {

// ---------------------------------------------------------------------------
// Rate schedules

enum class DecayKind : std::uint8_t { constant, geometric, polynomial };

/// Non-increasing schedules. geometric: eps_t = eps_1 * rho^(t-1),
/// polynomial: eps_t = eps_1 * t^(-alpha); both floored at eps_min.
struct DecayParams {
  DecayKind kind = DecayKind::geometric;
  double eps_first = 0.25;
  double rho = 0.999;
  double alpha = 0.5;
  double eps_min = 1e-4;
};

inline RateSchedule decreasing_rate_schedule(const DecayParams& p, Horizon horizon) {
  if (!(p.eps_first > 0.0 && p.eps_first <= 1.0)) throw std::invalid_argument("eps_1 must lie in (0,1]");
  if (!(p.eps_min > 0.0)) throw std::invalid_argument("eps_min must be positive");
  const auto n = static_cast<std::size_t>(horizon.steps() - 1);
  std::vector<double> eps(n);
  switch (p.kind) {
    case DecayKind::constant:
      std::fill(eps.begin(), eps.end(), p.eps_first);
      break;
    case DecayKind::geometric:
      if (!(p.rho > 0.0 && p.rho <= 1.0)) throw std::invalid_argument("geometric decay needs rho in (0,1]; increasing schedules are rejected");
      for (std::size_t i = 0; i < n; ++i) {
        eps[i] = std::max(p.eps_first * std::pow(p.rho, static_cast<double>(i)), p.eps_min);
      }
      break;
    case DecayKind::polynomial:
      if (!(p.alpha >= 0.0)) throw std::invalid_argument("polynomial decay needs alpha >= 0; increasing schedules are rejected");
      for (std::size_t i = 0; i < n; ++i) {
        eps[i] = std::max(p.eps_first * std::pow(static_cast<double>(i + 1), -p.alpha), p.eps_min);
      }
      break;
  }
  // The floor can exceed eps_1 only if eps_min > eps_1.
  if (p.kind != DecayKind::constant && p.eps_min > p.eps_first) {
    throw std::invalid_argument("eps_min above eps_1 would make the schedule increasing");
  }
  return RateSchedule(std::move(eps));
}

/// Rates alternating between blocks of `high` and `low` (high block first).
inline RateSchedule spiky_rate_schedule(double high, std::int64_t high_len, double low, std::int64_t low_len,
                                        Horizon horizon) {
  if (high_len < 1 || low_len < 1) throw std::invalid_argument("block lengths must be positive");
  const auto n = static_cast<std::size_t>(horizon.steps() - 1);
  std::vector<double> eps(n);
  const std::int64_t period = high_len + low_len;
  for (std::size_t i = 0; i < n; ++i) {
    eps[i] = (static_cast<std::int64_t>(i) % period) < high_len ? high : low;
  }
  return RateSchedule(std::move(eps));
}

// ---------------------------------------------------------------------------
// Oblivious generators

/// v_{t+1} = v_t +/- eps_t with equal probability; a step that would leave
/// [0,1] on either side is replaced by a zero step, so the process stays a
/// martingale.
inline std::vector<double> martingale_walk(const RateSchedule& schedule, double v1, std::uint64_t seed) {
  require_unit(v1, "v1");
  Rng rng(seed);
  const auto rates = schedule.rates();
  std::vector<double> v;
  v.reserve(rates.size() + 1);
  v.push_back(v1);
  for (double eps : rates) {
    const double cur = v.back();
    const bool up = rng.coin();  // drawn unconditionally so paths stay aligned across boundaries
    if (cur - eps < 0.0 || cur + eps > 1.0) {
      v.push_back(cur);
    } else {
      v.push_back(up ? cur + eps : cur - eps);
    }
  }
  return v;
}

inline std::int64_t phase_monotone_length(double eps) { return round_count(1.0 / std::sqrt(eps)); }

/// Transitions are grouped into phases of round(eps^{-1/2}) steps; each phase
/// moves monotonically up or down by eps per step (fair coin per phase),
/// clamped to [0,1].
inline std::vector<double> phase_monotone(double eps, double v1, std::uint64_t seed, Horizon horizon) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("phase_monotone needs eps in (0,1]");
  require_unit(v1, "v1");
  const std::int64_t m = phase_monotone_length(eps);
  Rng rng(seed);
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(horizon.steps()));
  v.push_back(v1);
  bool up = false;
  for (std::int64_t i = 0; i + 1 < horizon.steps(); ++i) {
    if (i % m == 0) up = rng.coin();
    v.push_back(clamp01(v.back() + (up ? eps : -eps)));
  }
  return v;
}

inline std::int64_t sawtooth_half_period(double eps) { return round_count(1.0 / eps); }

/// Periodic with period 2m, m = round(1/eps): v_{2km+j} = j*eps and
/// v_{2km+m+j} = 1 - (j-1)*eps for 1 <= j <= m.
inline std::vector<double> sawtooth(double eps, Horizon horizon) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("sawtooth needs eps in (0,1]");
  const std::int64_t m = sawtooth_half_period(eps);
  if (m < 2) throw std::invalid_argument("sawtooth needs round(1/eps) >= 2");
  std::vector<double> v(static_cast<std::size_t>(horizon.steps()));
  for (std::int64_t t = 1; t <= horizon.steps(); ++t) {
    const std::int64_t r = (t - 1) % (2 * m);  // 0-based position in the period
    const double x = r < m ? static_cast<double>(r + 1) * eps : 1.0 - static_cast<double>(r - m) * eps;
    v[static_cast<std::size_t>(t - 1)] = clamp01(x);
  }
  return v;
}

struct RateCheck {
  bool passed = true;
  std::optional<std::int64_t> first_violation;  // 1-based t of v_t -> v_{t+1}
};

inline RateCheck validate_rate(std::span<const double> values, const RateSchedule& schedule) {
  if (values.size() > schedule.rates().size() + 1) {
    throw std::invalid_argument("sequence longer than the schedule covers");
  }
  auto bad = first_rate_violation(values, schedule.rates());
  return RateCheck{!bad.has_value(), bad};
}

/// One value per line (optionally a header line that does not parse as a
/// number). Blank lines and '#' comments are skipped.
inline std::vector<double> read_values_csv(std::istream& in) {
  std::vector<double> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r,");
    const std::string cell = line.substr(b, e - b + 1);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cell.size()) {
      if (first && out.empty()) {
        first = false;
        continue;
      }
      throw std::invalid_argument("malformed value line: '" + line + "'");
    }
    first = false;
    require_unit(x, "scripted value");
    out.push_back(x);
  }
  return out;
}

inline std::vector<double> load_values_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open value file '" + path + "'");
  return read_values_csv(in);
}

// ---------------------------------------------------------------------------
// Round-by-round interface used by the engine

/// What an environment may see when committing v_t: everything strictly
/// before round t, never p_t.
struct RoundHistory {
  std::int64_t t = 1;
  std::span<const double> prices;        // p_1 .. p_{t-1}
  std::span<const std::uint8_t> sold;    // sigma_1 .. sigma_{t-1}
  double previous_value = 0.0;           // v_{t-1} (unused at t = 1)
  double previous_rate = 0.0;            // eps_{t-1} (0 at t = 1)
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual double commit(const RoundHistory& history) = 0;
  virtual const RateSchedule& schedule() const = 0;
};

/// Replays a precomputed (oblivious) value sequence.
class SequenceEnvironment final : public Environment {
 public:
  SequenceEnvironment(std::vector<double> values, RateSchedule schedule)
      : values_(std::move(values)), schedule_(std::move(schedule)) {
    if (static_cast<std::int64_t>(values_.size()) != schedule_.horizon().steps()) {
      throw std::invalid_argument("value sequence length must equal T");
    }
  }
  double commit(const RoundHistory& h) override { return values_.at(static_cast<std::size_t>(h.t - 1)); }
  const RateSchedule& schedule() const override { return schedule_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
  RateSchedule schedule_;
};

/// Adaptive adversary contract: (t, p_<t, sigma_<t, v_{t-1}, eps_{t-1}) -> v_t,
/// called only for t >= 2 (v_1 is fixed by the spec).
using AdaptiveAdversary = std::function<double(const RoundHistory&)>;

class AdaptiveEnvironment final : public Environment {
 public:
  AdaptiveEnvironment(RateSchedule schedule, double v1, AdaptiveAdversary adversary)
      : schedule_(std::move(schedule)), v1_(v1), adversary_(std::move(adversary)) {
    require_unit(v1, "v1");
  }
  double commit(const RoundHistory& h) override { return h.t == 1 ? v1_ : adversary_(h); }
  const RateSchedule& schedule() const override { return schedule_; }

 private:
  RateSchedule schedule_;
  double v1_;
  AdaptiveAdversary adversary_;
};

/// Moves v away from the last posted price by the full rate: up after a
/// sale, down after a no-sale (clamped). Drives bisection to its worst case.
inline AdaptiveAdversary away_from_price_adversary() {
  return [](const RoundHistory& h) {
    const bool last_sold = !h.sold.empty() && h.sold.back() != 0;
    return clamp01(h.previous_value + (last_sold ? h.previous_rate : -h.previous_rate));
  };
}

// ---------------------------------------------------------------------------
// Declarative environment description

enum class EnvironmentKind : std::uint8_t { martingale_walk, phase_monotone, sawtooth, constant, scripted, adaptive };

inline constexpr std::string_view to_string(EnvironmentKind k) noexcept {
  switch (k) {
    case EnvironmentKind::martingale_walk: return "martingale";
    case EnvironmentKind::phase_monotone: return "phase_monotone";
    case EnvironmentKind::sawtooth: return "sawtooth";
    case EnvironmentKind::constant: return "constant";
    case EnvironmentKind::scripted: return "scripted";
    case EnvironmentKind::adaptive: return "adaptive";
  }
  return "unknown";
}

inline EnvironmentKind environment_kind_from_string(std::string_view s) {
  if (s == "martingale" || s == "martingale_walk") return EnvironmentKind::martingale_walk;
  if (s == "phase_monotone") return EnvironmentKind::phase_monotone;
  if (s == "sawtooth") return EnvironmentKind::sawtooth;
  if (s == "constant") return EnvironmentKind::constant;
  if (s == "scripted") return EnvironmentKind::scripted;
  if (s == "adaptive" || s == "away") return EnvironmentKind::adaptive;
  throw std::invalid_argument("unknown environment kind '" + std::string(s) + "'");
}

struct EnvironmentParams {
  std::vector<double> script;         // scripted
  std::string script_path;            // scripted, loaded lazily when script is empty
  std::string adaptive_policy = "away";
};

struct EnvironmentSpec {
  EnvironmentKind kind = EnvironmentKind::martingale_walk;
  EnvironmentParams params;
  RateSchedule schedule = RateSchedule({0.01});
  double v1 = 0.5;
};

namespace detail {
inline double single_rate(const RateSchedule& s, std::string_view who) {
  if (!s.is_constant()) throw std::invalid_argument(std::string(who) + " needs a constant rate schedule");
  return s.rates().front();
}
}  // namespace detail

inline std::unique_ptr<Environment> make_environment(const EnvironmentSpec& spec, std::uint64_t seed) {
  const Horizon horizon = spec.schedule.horizon();
  switch (spec.kind) {
    case EnvironmentKind::martingale_walk:
      return std::make_unique<SequenceEnvironment>(martingale_walk(spec.schedule, spec.v1, seed), spec.schedule);
    case EnvironmentKind::phase_monotone:
      return std::make_unique<SequenceEnvironment>(
          phase_monotone(detail::single_rate(spec.schedule, "phase_monotone"), spec.v1, seed, horizon), spec.schedule);
    case EnvironmentKind::sawtooth:
      return std::make_unique<SequenceEnvironment>(sawtooth(detail::single_rate(spec.schedule, "sawtooth"), horizon),
                                                   spec.schedule);
    case EnvironmentKind::constant:
      require_unit(spec.v1, "v1");
      return std::make_unique<SequenceEnvironment>(
          std::vector<double>(static_cast<std::size_t>(horizon.steps()), spec.v1), spec.schedule);
    case EnvironmentKind::scripted: {
      std::vector<double> values =
          spec.params.script.empty() ? load_values_csv(spec.params.script_path) : spec.params.script;
      if (auto check = validate_rate(values, spec.schedule); !check.passed) {
        throw RateViolation(*check.first_violation,
                            std::abs(values[static_cast<std::size_t>(*check.first_violation)] -
                                     values[static_cast<std::size_t>(*check.first_violation - 1)]),
                            spec.schedule.at(*check.first_violation));
      }
      return std::make_unique<SequenceEnvironment>(std::move(values), spec.schedule);
    }
    case EnvironmentKind::adaptive:
      if (spec.params.adaptive_policy != "away") {
        throw std::invalid_argument("unknown adaptive policy '" + spec.params.adaptive_policy + "'");
      }
      return std::make_unique<AdaptiveEnvironment>(spec.schedule, spec.v1, away_from_price_adversary());
  }
  throw std::logic_error("unhandled environment kind");
}

}  // namespace driftprice
