// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "driftprice/driftprice.hpp"

using namespace driftprice;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

void note(Verdict& v, bool ok, const std::string& what) {
  if (!ok) v.pass = false;
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += (ok ? "" : "!") + what;
}

std::string fmt(double x, const char* f = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<double> dyadic_grid(int from, int to) {
  std::vector<double> out;
  for (int k = from; k <= to; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

/// Mean loss of one strategy per grid point.
const SweepRow& row_for(const SweepReport& r, const std::string& strategy, const std::string& env, double eps_bar) {
  for (const auto& row : r.rows) {
    if (row.strategy == strategy && row.environment == env && std::abs(row.eps_bar - eps_bar) <= 1e-9 * eps_bar) {
      return row;
    }
  }
  throw std::runtime_error("missing row " + strategy + "/" + env);
}

const SlopeFit& slope_for(const SweepReport& r, const std::string& strategy, const std::string& env) {
  for (const auto& s : r.slopes) {
    if (s.strategy == strategy && s.environment == env) return s.fit;
  }
  throw std::runtime_error("missing slope " + strategy + "/" + env);
}

void require_clean(const SweepReport& r) {
  if (!r.failures.empty()) throw std::runtime_error("episode failures: " + r.failures.front());
}

SweepSpec base_spec(std::vector<std::string> strategies, std::vector<std::string> envs, std::vector<double> eps) {
  SweepSpec s;
  s.strategies = std::move(strategies);
  s.environments = std::move(envs);
  s.eps = std::move(eps);
  s.reps = 20;
  s.seed = 20240601;
  s.threads = std::max(1u, std::thread::hardware_concurrency());
  return s;
}

Verdict criterion1() {
  SweepSpec spec = base_spec({"s1"}, {"martingale"}, dyadic_grid(4, 10));
  spec.T = 100000;
  const SweepReport r = run_sweep(spec);
  require_clean(r);
  Verdict v;
  const SlopeFit& fit = slope_for(r, "s1", "martingale");
  note(v, fit.slope >= 0.85 && fit.slope <= 1.15, "slope " + fmt(fit.slope) + " in [0.85,1.15]");
  double lo_ratio = 1e9;
  double hi_ratio = 0.0;
  for (const auto& row : r.rows) {
    const double ratio = row.mean_loss / row.eps_bar;
    lo_ratio = std::min(lo_ratio, ratio);
    hi_ratio = std::max(hi_ratio, ratio);
  }
  note(v, lo_ratio >= 0.9 && hi_ratio <= 8.0, "loss/eps in [" + fmt(lo_ratio) + ", " + fmt(hi_ratio) + "] within [0.9, 8]");
  return v;
}

SweepReport revenue_sweep(std::vector<std::string> strategies, std::vector<std::string> envs) {
  SweepSpec spec = base_spec(std::move(strategies), std::move(envs), dyadic_grid(4, 10));
  spec.T_floor = 100000;
  spec.T_per_inv_eps = 50.0;
  SweepReport r = run_sweep(spec);
  require_clean(r);
  return r;
}

Verdict criterion2(const SweepReport& r) {
  Verdict v;
  for (const char* env : {"phase_monotone", "martingale"}) {
    const SlopeFit& fit = slope_for(r, "s3", env);
    note(v, fit.slope >= 0.35 && fit.slope <= 0.65, std::string(env) + " slope " + fmt(fit.slope) + " in [0.35,0.65]");
  }
  return v;
}

Verdict criterion3(const SweepReport& r) {
  Verdict v;
  const SlopeFit& fit = slope_for(r, "s4", "martingale");
  note(v, fit.slope >= 0.5 && fit.slope <= 0.85, "slope " + fmt(fit.slope) + " in [0.5,0.85]");
  for (double e : dyadic_grid(6, 10)) {
    const double s4 = row_for(r, "s4", "martingale", e).mean_loss;
    const double s3 = row_for(r, "s3", "martingale", e).mean_loss;
    note(v, s4 <= s3, "eps=2^" + fmt(std::log2(e), "%.0f") + " s4 " + fmt(s4) + " <= s3 " + fmt(s3));
  }
  return v;
}

Verdict criterion4() {
  SweepSpec spec = base_spec({"s1", "s5", "s3", "s6", "s4", "s7"}, {"martingale"}, dyadic_grid(6, 10));
  spec.T = 100000;
  const SweepReport r = run_sweep(spec);
  require_clean(r);
  Verdict v;
  const std::pair<const char*, const char*> pairs[] = {{"s5", "s1"}, {"s6", "s3"}, {"s7", "s4"}};
  for (const auto& [unknown, known] : pairs) {
    double worst = 0.0;
    for (double e : spec.eps) {
      worst = std::max(worst, row_for(r, unknown, "martingale", e).mean_loss / row_for(r, known, "martingale", e).mean_loss);
    }
    note(v, worst <= 10.0, std::string(unknown) + "/" + known + " max ratio " + fmt(worst) + " <= 10");
  }
  return v;
}

Verdict criterion5() {
  // Halving needs (log2 T)^3 clean rounds, so the decay is set to halve eps
  // about once per 3 (log2 T)^3 steps.
  const std::int64_t T = 1 << 16;
  SweepSpec spec = base_spec({"s8", "s12", "s9", "s13", "s10", "s14"}, {"martingale"}, {0.25});
  spec.T = T;
  spec.schedule = ScheduleKind::geometric;
  spec.rho = std::exp2(-1.0 / (3.0 * std::pow(std::log2(static_cast<double>(T)), 3)));
  spec.eps_min = std::ldexp(1.0, -12);
  const SweepReport r = run_sweep(spec);
  require_clean(r);
  Verdict v;
  const double eps_bar = r.rows.front().eps_bar;
  const std::pair<const char*, const char*> pairs[] = {{"s8", "s12"}, {"s9", "s13"}, {"s10", "s14"}};
  for (const auto& [unknown, known] : pairs) {
    const double a = row_for(r, unknown, "martingale", eps_bar).mean_loss;
    const double b = row_for(r, known, "martingale", eps_bar).mean_loss;
    note(v, a <= 10.0 * b, std::string(unknown) + "/" + known + " ratio " + fmt(a / b) + " <= 10");
  }
  return v;
}

Verdict criterion6() {
  const std::int64_t T = 1 << 14;
  SweepSpec spec = base_spec({"s11"}, {"adaptive", "martingale"}, {0.125});
  spec.T = T;
  spec.reps = 50;
  spec.schedule = ScheduleKind::spiky;
  spec.spike_low = std::ldexp(1.0, -10);
  spec.spike_high_len = 32;
  spec.spike_low_len = 992;
  const SweepReport r = run_sweep(spec);
  require_clean(r);
  Verdict v;
  for (const auto& row : r.rows) {
    const double c = row.mean_loss / (row.eps_bar * std::log2(static_cast<double>(T)));
    note(v, c <= 16.0, row.environment + " C=" + fmt(c) + " <= 16");
  }
  return v;
}

Verdict criterion7() {
  SweepSpec spec = base_spec({"s15", "s3"}, {"sawtooth"}, {0.05});
  spec.T = 50000;
  const SweepReport r = run_sweep(spec);
  require_clean(r);
  const double exp3 = r.rows.at(0).mean_loss;
  const double s3 = r.rows.at(1).mean_loss;
  Verdict v;
  note(v, exp3 >= 0.05, "exp3 loss " + fmt(exp3) + " >= 0.05");
  note(v, exp3 >= 3.0 * s3, "exp3/s3 = " + fmt(exp3 / s3) + " >= 3");
  return v;
}

Verdict criterion8() {
  Verdict v;
  // Containment on 100 seeds for every known-rate strategy.
  std::int64_t violations = 0;
  for (const char* id : {"s1", "s3", "s4", "s12", "s13", "s14"}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng pick(seed * 31 + 7);
      EpisodeConfig c;
      c.environment.kind = seed % 3 == 0 ? EnvironmentKind::adaptive
                           : seed % 3 == 1 ? EnvironmentKind::phase_monotone
                                           : EnvironmentKind::martingale_walk;
      const Horizon h(2000 + static_cast<std::int64_t>(pick.index(2000)));
      const double eps = std::ldexp(1.0, -static_cast<int>(3 + pick.index(8)));
      c.environment.schedule = RateSchedule::constant(eps, h);
      if (std::string_view(id).size() == 3 && seed % 3 == 2) {
        c.environment.schedule = decreasing_rate_schedule({DecayKind::geometric, eps, 0.999, 0.5, eps / 64}, h);
      }
      c.environment.v1 = pick.uniform01();
      c.strategy = id;
      c.seed = seed;
      violations += static_cast<std::int64_t>(oracle::audit_containment(run_episode(c)).size());
    }
  }
  note(v, violations == 0, "containment violations " + std::to_string(violations));

  // Determinism, including under batch parallelism.
  std::vector<EpisodeConfig> batch;
  bool identical = true;
  for (const auto& info : kStrategies) {
    EpisodeConfig c;
    c.environment.kind = EnvironmentKind::martingale_walk;
    c.environment.schedule = RateSchedule::constant(1.0 / 64, Horizon(3000));
    c.strategy = std::string(info.id);
    c.seed = 99;
    identical = identical && run_episode(c) == run_episode(c);
    batch.push_back(c);
  }
  const auto one = run_batch(batch, 1);
  const auto many = run_batch(batch, 8);
  for (std::size_t i = 0; i < batch.size(); ++i) identical = identical && one[i].summary == many[i].summary;
  note(v, identical, "determinism");

  // Price range and EXP3 sanity under fuzzed environments.
  bool in_range = true;
  bool exp3_ok = true;
  std::int64_t errors = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng pick(seed);
    const EnvironmentKind kinds[] = {EnvironmentKind::martingale_walk, EnvironmentKind::phase_monotone,
                                     EnvironmentKind::sawtooth, EnvironmentKind::constant, EnvironmentKind::adaptive};
    const Horizon h(2 + static_cast<std::int64_t>(pick.index(3000)));
    const double eps = 0.5 * (0.01 + pick.uniform01());
    for (const auto& info : kStrategies) {
      EnvironmentSpec env;
      env.kind = kinds[pick.index(5)];
      env.schedule = RateSchedule::constant(eps, h);
      env.v1 = pick.uniform01();
      if (env.kind == EnvironmentKind::sawtooth && std::llround(1.0 / eps) < 2) env.kind = EnvironmentKind::constant;
      auto environment = make_environment(env, seed);
      StrategyInput input{h, knowledge_for(info.id, env.schedule), seed, {}};
      auto strategy = make_strategy(info.id, input);
      auto* exp3 = dynamic_cast<Exp3Strategy*>(strategy.get());
      try {
        double prev = env.v1;
        std::vector<double> prices;
        std::vector<std::uint8_t> sold;
        for (std::int64_t t = 1; t <= h.steps(); ++t) {
          const double value = environment->commit({t, prices, sold, prev, t > 1 ? eps : 0.0});
          const double p = strategy->next_price();
          in_range = in_range && std::isfinite(p) && p >= 0.0 && p <= 1.0;
          if (exp3) {
            double total = 0.0;
            const double floor = exp3->learning_rate() / static_cast<double>(exp3->arm_count());
            for (double q : exp3->probabilities()) {
              total += q;
              exp3_ok = exp3_ok && q >= floor;
            }
            exp3_ok = exp3_ok && std::abs(total - 1.0) <= 1e-12;
          }
          prices.push_back(p);
          sold.push_back(p <= value);
          prev = value;
          strategy->observe(p <= value);
        }
      } catch (const std::exception&) {
        ++errors;
      }
    }
  }
  note(v, in_range && errors == 0, "prices in [0,1] for all 15 (errors " + std::to_string(errors) + ")");
  note(v, exp3_ok, "exp3 distribution sanity");

  // Width recursion on s12 traces.
  bool widths = true;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng pick(seed + 1000);
    const Horizon h(500 + static_cast<std::int64_t>(pick.index(1500)));
    std::vector<double> eps(static_cast<std::size_t>(h.steps() - 1));
    for (double& e : eps) e = 0.1 * pick.uniform01();
    EpisodeConfig c;
    c.environment.kind = seed % 2 ? EnvironmentKind::adaptive : EnvironmentKind::martingale_walk;
    c.environment.schedule = RateSchedule(eps);
    c.strategy = "s12";
    c.seed = seed;
    widths = widths && oracle::width_recursion_check(run_episode(c)).passed;
  }
  note(v, widths, "s12 width recursion");
  return v;
}

std::vector<std::int64_t> exploit_runs(const EpisodeTrace& trace) {
  std::vector<std::int64_t> runs;
  std::int64_t current = 0;
  for (const auto& s : trace.steps()) {
    if (s.note && s.note->role == PriceRole::exploit) {
      ++current;
    } else if (current > 0) {
      runs.push_back(current);
      current = 0;
    }
  }
  return runs;  // the final, possibly truncated run is left out
}

Verdict criterion9() {
  Verdict v;
  bool same_prices = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double eps = std::ldexp(1.0, -static_cast<int>(2 + seed % 8));
    EpisodeConfig a;
    a.environment.kind = seed % 2 ? EnvironmentKind::adaptive : EnvironmentKind::martingale_walk;
    a.environment.schedule = RateSchedule::constant(eps, Horizon(5000));
    a.seed = seed;
    a.strategy = "s1";
    EpisodeConfig b = a;
    b.strategy = "s12";
    same_prices = same_prices && run_episode(a).prices() == run_episode(b).prices();
  }
  note(v, same_prices, "s12 price stream equals s1");

  const std::pair<const char*, const char*> pairs[] = {{"s13", "s3"}, {"s14", "s4"}};
  for (const auto& [dynamic, fixed] : pairs) {
    bool close = true;
    std::string seen;
    for (double eps : dyadic_grid(4, 10)) {
      EpisodeConfig a;
      a.environment.kind = EnvironmentKind::martingale_walk;
      a.environment.schedule = RateSchedule::constant(eps, Horizon(50000));
      a.seed = 5;
      a.strategy = dynamic;
      EpisodeConfig b = a;
      b.strategy = fixed;
      const auto ra = exploit_runs(run_episode(a));
      const auto rb = exploit_runs(run_episode(b));
      if (ra.empty() || rb.empty()) {
        close = false;
        continue;
      }
      for (auto x : ra) close = close && std::abs(x - rb.front()) <= 1;
      for (auto x : rb) close = close && x == rb.front();
      seen += (seen.empty() ? "" : ",") + std::to_string(ra.front()) + "/" + std::to_string(rb.front());
    }
    note(v, close, std::string(dynamic) + "~" + fixed + " phase lengths " + seen);
  }
  return v;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* title, const std::function<Verdict()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failed;
  };

  report(1, "symmetric-loss scaling, s1 vs martingale", criterion1);
  SweepReport revenue;
  bool revenue_ok = true;
  std::string revenue_error;
  try {
    revenue = revenue_sweep({"s3", "s4"}, {"phase_monotone", "martingale"});
  } catch (const std::exception& e) {
    revenue_ok = false;
    revenue_error = e.what();
  }
  report(2, "adversarial revenue scaling, s3", [&] {
    if (!revenue_ok) throw std::runtime_error(revenue_error);
    return criterion2(revenue);
  });
  report(3, "stochastic revenue scaling, s4 vs martingale", [&] {
    if (!revenue_ok) throw std::runtime_error(revenue_error);
    return criterion3(revenue);
  });
  report(4, "unknown-rate parity", criterion4);
  report(5, "decreasing-rate tracking", criterion5);
  report(6, "arbitrary-rate symmetric loss, s11", criterion6);
  report(7, "EXP3 on the sawtooth", criterion7);
  report(8, "invariant suites", criterion8);
  report(9, "degeneration", criterion9);
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
