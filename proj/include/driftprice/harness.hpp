#pragma once

// Sweeps over (strategy, environment, eps) cells, aggregation, log-log slope
// fits, and the CSV/JSON/config text formats.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "json.hpp"

#include "driftprice/engine.hpp"
#include "driftprice/environments.hpp"
#include "driftprice/registry.hpp"
#include "driftprice/trace_io.hpp"

namespace driftprice {

// ---------------------------------------------------------------------------
// Slope fitting

struct SlopePoint {
  double eps_bar;
  double loss;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double ci_low = 0.0;   // 95% interval on the slope
  double ci_high = 0.0;
  std::int64_t points = 0;
  std::vector<std::string> warnings;
};

/// Ordinary least squares of ln(loss) on ln(eps_bar). Points with a
/// non-positive coordinate are dropped with a warning; at least three usable
/// points are required.
inline SlopeFit fit_loglog_slope(const std::vector<SlopePoint>& points) {
  SlopeFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    if (!(p.eps_bar > 0.0) || !(p.loss > 0.0)) {
      fit.warnings.push_back("dropped point (eps_bar=" + format_real(p.eps_bar) + ", loss=" + format_real(p.loss) +
                             "): logarithm undefined");
      continue;
    }
    xs.push_back(std::log(p.eps_bar));
    ys.push_back(std::log(p.loss));
  }
  const auto n = static_cast<std::int64_t>(xs.size());
  if (n < 3) throw std::invalid_argument("slope fit needs at least 3 positive points, got " + std::to_string(n));
  const double nd = static_cast<double>(n);
  double mx = 0.0;
  double my = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= nd;
  my /= nd;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("slope fit needs at least two distinct eps values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ssr += r * r;
  }
  fit.stderr_slope = std::sqrt(ssr / (nd - 2.0) / sxx);
  const boost::math::students_t dist(nd - 2.0);
  const double q = boost::math::quantile(dist, 0.975);
  fit.ci_low = fit.slope - q * fit.stderr_slope;
  fit.ci_high = fit.slope + q * fit.stderr_slope;
  fit.points = n;
  return fit;
}

// ---------------------------------------------------------------------------
// Sweep description

enum class ScheduleKind : std::uint8_t { constant, geometric, polynomial, spiky };

inline constexpr std::string_view to_string(ScheduleKind k) noexcept {
  switch (k) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::geometric: return "geometric";
    case ScheduleKind::polynomial: return "polynomial";
    case ScheduleKind::spiky: return "spiky";
  }
  return "constant";
}

inline ScheduleKind schedule_kind_from_string(std::string_view s) {
  for (auto k : {ScheduleKind::constant, ScheduleKind::geometric, ScheduleKind::polynomial, ScheduleKind::spiky}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown schedule kind '" + std::string(s) + "'");
}

inline std::string_view to_string(OffsetVariant v) noexcept {
  switch (v) {
    case OffsetVariant::standard: return "standard";
    case OffsetVariant::polylog: return "polylog";
    case OffsetVariant::literal: return "literal";
  }
  return "standard";
}

inline OffsetVariant offset_variant_from_string(std::string_view s) {
  for (auto v : {OffsetVariant::standard, OffsetVariant::polylog, OffsetVariant::literal}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown offset variant '" + std::string(s) + "'");
}

struct SweepSpec {
  std::vector<std::string> strategies{"s1"};
  std::vector<std::string> environments{"martingale"};
  /// The grid; each value is the constant rate, or eps_1 / the spike rate for
  /// non-constant schedules.
  std::vector<double> eps{0.0625, 0.03125, 0.015625};
  std::optional<std::int64_t> T;     // fixed horizon for every cell
  std::int64_t T_floor = 100000;     // otherwise T = max(T_floor, T_per_inv_eps / eps)
  double T_per_inv_eps = 10.0;
  std::int64_t reps = 20;
  std::uint64_t seed = 1;
  double v1 = 0.5;
  ScheduleKind schedule = ScheduleKind::constant;
  double rho = 0.999;
  double alpha = 0.5;
  double eps_min = 1.0 / 4096.0;
  double spike_low = 1.0 / 1024.0;
  std::int64_t spike_high_len = 4;
  std::int64_t spike_low_len = 1024;
  std::string script;                // value file for scripted environments
  OffsetVariant offset_variant = OffsetVariant::standard;
  bool raw = false;                  // report both losses for every strategy
  unsigned threads = 1;
  std::string csv;
  std::string json;                  // defaults to the CSV path with a .json extension

  void validate() const {
    if (strategies.empty()) throw std::invalid_argument("sweep needs at least one strategy");
    if (environments.empty()) throw std::invalid_argument("sweep needs at least one environment");
    if (eps.empty()) throw std::invalid_argument("sweep needs a non-empty eps grid");
    for (double e : eps) {
      if (!(e > 0.0 && e <= 0.5)) throw std::invalid_argument("eps grid values must lie in (0, 1/2], got " + format_real(e));
    }
    if (reps < 1) throw std::invalid_argument("reps must be at least 1");
    if (T && *T < 2) throw std::invalid_argument("T must be at least 2");
    for (const auto& s : strategies) (void)strategy_info(s);
    for (const auto& e : environments) (void)environment_kind_from_string(e);
  }

  std::int64_t horizon_for(double e) const {
    if (T) return *T;
    return std::max<std::int64_t>(T_floor, static_cast<std::int64_t>(std::ceil(T_per_inv_eps / e)));
  }
};

/// Geometric grid of `count` values from `start` to `end` inclusive.
inline std::vector<double> geometric_grid(double start, double end, std::int64_t count) {
  if (count < 1 || !(start > 0.0) || !(end > 0.0)) throw std::invalid_argument("bad geometric grid");
  std::vector<double> out;
  if (count == 1) return {start};
  const double ratio = std::pow(end / start, 1.0 / static_cast<double>(count - 1));
  for (std::int64_t i = 0; i < count; ++i) {
    out.push_back(i == count - 1 ? end : start * std::pow(ratio, static_cast<double>(i)));
  }
  return out;
}

inline RateSchedule build_schedule(const SweepSpec& spec, double eps, Horizon horizon) {
  switch (spec.schedule) {
    case ScheduleKind::constant: return RateSchedule::constant(eps, horizon);
    case ScheduleKind::geometric:
      return decreasing_rate_schedule({DecayKind::geometric, eps, spec.rho, spec.alpha, spec.eps_min}, horizon);
    case ScheduleKind::polynomial:
      return decreasing_rate_schedule({DecayKind::polynomial, eps, spec.rho, spec.alpha, spec.eps_min}, horizon);
    case ScheduleKind::spiky:
      return spiky_rate_schedule(eps, spec.spike_high_len, spec.spike_low, spec.spike_low_len, horizon);
  }
  throw std::logic_error("unhandled schedule kind");
}

/// env seed = splitmix64(fnv1a64("env|eps_index|rep") ^ base); strategy seed
/// adds the strategy id in front. Every strategy in a cell therefore faces
/// the same value paths.
inline std::uint64_t cell_env_seed(std::uint64_t base, std::string_view env, std::size_t eps_index, std::int64_t rep) {
  const std::string label = std::string(env) + "|" + std::to_string(eps_index) + "|" + std::to_string(rep);
  return splitmix64(fnv1a64(label) ^ base);
}

inline std::uint64_t cell_strategy_seed(std::uint64_t base, std::string_view strategy, std::string_view env,
                                        std::size_t eps_index, std::int64_t rep) {
  const std::string label = std::string(strategy) + "|" + std::string(env) + "|" + std::to_string(eps_index) + "|" +
                            std::to_string(rep);
  return splitmix64(fnv1a64(label) ^ base);
}

inline std::vector<EpisodeConfig> cell_configs(const SweepSpec& spec, const std::string& strategy,
                                               const std::string& env, std::size_t eps_index) {
  const double e = spec.eps.at(eps_index);
  const Horizon horizon(spec.horizon_for(e));
  EnvironmentSpec env_spec;
  env_spec.kind = environment_kind_from_string(env);
  env_spec.schedule = build_schedule(spec, e, horizon);
  env_spec.v1 = spec.v1;
  env_spec.params.script_path = spec.script;
  if (env_spec.kind == EnvironmentKind::scripted && !spec.script.empty()) {
    env_spec.params.script = load_values_csv(spec.script);
  }
  const std::string id = canonical_strategy_id(strategy);
  const std::string env_name(to_string(env_spec.kind));
  std::vector<EpisodeConfig> out;
  out.reserve(static_cast<std::size_t>(spec.reps));
  for (std::int64_t r = 0; r < spec.reps; ++r) {
    EpisodeConfig c;
    c.environment = env_spec;
    c.strategy = id;
    c.options.offset_variant = spec.offset_variant;
    c.seed = spec.seed;
    c.env_seed = cell_env_seed(spec.seed, env_name, eps_index, r);
    c.strat_seed = cell_strategy_seed(spec.seed, id, env_name, eps_index, r);
    c.record_intervals = false;
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report

struct SweepRow {
  std::string strategy;      // id, or "id[metric]" in raw mode
  std::string environment;
  double eps_bar = 0.0;
  std::int64_t T = 0;
  std::int64_t reps = 0;
  double mean_loss = 0.0;
  std::optional<double> stderr_loss;  // absent when reps == 1

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SlopeRow {
  std::string strategy;
  std::string environment;
  SlopeFit fit;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<SlopeRow> slopes;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
};

struct MeanStderr {
  double mean = 0.0;
  std::optional<double> stderr_value;
};

inline MeanStderr mean_and_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double n = static_cast<double>(xs.size());
  out.mean = sum / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stderr_value = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

inline void attach_slopes(SweepReport& report) {
  report.slopes.clear();
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& row : report.rows) {
    std::pair<std::string, std::string> k{row.strategy, row.environment};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  for (const auto& [strategy, env] : keys) {
    std::vector<SlopePoint> pts;
    for (const auto& row : report.rows) {
      if (row.strategy == strategy && row.environment == env) pts.push_back({row.eps_bar, row.mean_loss});
    }
    if (pts.size() < 3) continue;
    try {
      SlopeFit fit = fit_loglog_slope(pts);
      for (const auto& w : fit.warnings) report.warnings.push_back(strategy + "/" + env + ": " + w);
      report.slopes.push_back({strategy, env, std::move(fit)});
    } catch (const std::exception& e) {
      report.warnings.push_back(strategy + "/" + env + ": no slope: " + e.what());
    }
  }
}

inline SweepReport run_sweep(const SweepSpec& spec, bool progress = false) {
  spec.validate();
  SweepReport report;
  for (const auto& strategy : spec.strategies) {
    const StrategyInfo& info = strategy_info(strategy);
    for (const auto& env : spec.environments) {
      const std::string env_name(to_string(environment_kind_from_string(env)));
      for (std::size_t i = 0; i < spec.eps.size(); ++i) {
        std::vector<EpisodeConfig> configs;
        try {
          configs = cell_configs(spec, strategy, env, i);
        } catch (const std::exception& e) {
          report.failures.push_back(std::string(info.id) + "/" + env_name + "/eps=" + format_real(spec.eps[i]) + ": " +
                                    e.what());
          continue;
        }
        const double eps_bar = configs.front().environment.schedule.average();
        const std::int64_t T = configs.front().horizon().steps();
        const auto results = run_batch(configs, BatchOptions{spec.threads, false});
        std::vector<LossSummary> ok;
        for (std::size_t r = 0; r < results.size(); ++r) {
          if (results[r].ok()) {
            ok.push_back(*results[r].summary);
          } else {
            report.failures.push_back(std::string(info.id) + "/" + env_name + "/eps=" + format_real(spec.eps[i]) +
                                      "/rep=" + std::to_string(r) + ": " + results[r].error);
          }
        }
        if (ok.empty()) continue;
        std::vector<LossMetric> metrics;
        if (spec.raw) {
          metrics = {LossMetric::revenue, LossMetric::symmetric};
        } else {
          metrics = {info.metric};
        }
        for (LossMetric metric : metrics) {
          std::vector<double> losses;
          for (const auto& s : ok) losses.push_back(select_loss(s, metric));
          const MeanStderr agg = mean_and_stderr(losses);
          std::string label(info.id);
          if (spec.raw) label += "[" + std::string(to_string(metric)) + "]";
          report.rows.push_back({label, env_name, eps_bar, T, static_cast<std::int64_t>(ok.size()), agg.mean,
                                 agg.stderr_value});
        }
        if (progress) {
          std::cerr << info.id << " " << env_name << " eps=" << format_real(spec.eps[i]) << " T=" << T
                    << " mean=" << format_real(report.rows.back().mean_loss) << '\n';
        }
      }
    }
  }
  attach_slopes(report);
  return report;
}

// ---------------------------------------------------------------------------
// CSV / JSON

inline constexpr std::string_view kCsvHeader = "strategy,environment,eps_bar,T,reps,mean_loss,stderr_loss";

inline nlohmann::json slopes_to_json(const SweepReport& report) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : report.slopes) {
    arr.push_back({{"strategy", s.strategy},
                   {"environment", s.environment},
                   {"slope", s.fit.slope},
                   {"intercept", s.fit.intercept},
                   {"stderr", s.fit.stderr_slope},
                   {"ci95", {s.fit.ci_low, s.fit.ci_high}},
                   {"points", s.fit.points}});
  }
  return arr;
}

inline void write_report_csv(std::ostream& out, const SweepReport& report) {
  out << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.strategy << ',' << r.environment << ',' << format_real(r.eps_bar) << ',' << r.T << ',' << r.reps << ','
        << format_real(r.mean_loss) << ',' << (r.stderr_loss ? format_real(*r.stderr_loss) : "") << '\n';
  }
  if (!report.slopes.empty()) {
    out << "# slopes: strategy,environment,slope,intercept,stderr,ci95_low,ci95_high,points\n";
    for (const auto& s : report.slopes) {
      out << "# " << s.strategy << ',' << s.environment << ',' << format_real(s.fit.slope) << ','
          << format_real(s.fit.intercept) << ',' << format_real(s.fit.stderr_slope) << ','
          << format_real(s.fit.ci_low) << ',' << format_real(s.fit.ci_high) << ',' << s.fit.points << '\n';
    }
  }
}

namespace detail {
inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

inline SweepReport read_report_csv(std::istream& in) {
  SweepReport report;
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != kCsvHeader) {
    throw std::runtime_error("report CSV: unexpected header");
  }
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = detail::trim(line.substr(1));
      if (body.rfind("slopes:", 0) == 0) continue;
      const auto f = detail::split(body, ',');
      if (f.size() != 8) continue;
      SlopeRow s{f[0], f[1], {}};
      s.fit.slope = std::stod(f[2]);
      s.fit.intercept = std::stod(f[3]);
      s.fit.stderr_slope = std::stod(f[4]);
      s.fit.ci_low = std::stod(f[5]);
      s.fit.ci_high = std::stod(f[6]);
      s.fit.points = std::stoll(f[7]);
      report.slopes.push_back(std::move(s));
      continue;
    }
    const auto f = detail::split(line, ',');
    if (f.size() != 7) throw std::runtime_error("report CSV: expected 7 fields in '" + line + "'");
    SweepRow r;
    r.strategy = f[0];
    r.environment = f[1];
    r.eps_bar = std::stod(f[2]);
    r.T = std::stoll(f[3]);
    r.reps = std::stoll(f[4]);
    r.mean_loss = std::stod(f[5]);
    if (!f[6].empty()) r.stderr_loss = std::stod(f[6]);
    report.rows.push_back(std::move(r));
  }
  return report;
}

inline std::string sibling_json_path(const std::string& csv_path) {
  const auto dot = csv_path.find_last_of('.');
  const auto slash = csv_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv_path + ".json";
  return csv_path.substr(0, dot) + ".json";
}

inline void save_report(const SweepReport& report, const std::string& csv_path, std::string json_path = {}) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write '" + csv_path + "'");
  write_report_csv(csv, report);
  if (json_path.empty()) json_path = sibling_json_path(csv_path);
  std::ofstream js(json_path);
  if (!js) throw std::runtime_error("cannot write '" + json_path + "'");
  js << slopes_to_json(report).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// key = value config files

using ConfigMap = std::map<std::string, std::string>;

inline ConfigMap parse_config(std::istream& in) {
  ConfigMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    out[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

inline ConfigMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return parse_config(in);
}

namespace detail {
inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto& item : split(s, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(std::stod(item));
  return out;
}

inline bool parse_bool(const std::string& s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

inline std::string join_reals(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_real(xs[i]);
  return out;
}

inline std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
  return out;
}
}  // namespace detail

/// Apply config keys to a spec; unknown keys are an error.
inline void apply_config(const ConfigMap& cfg, SweepSpec& spec) {
  for (const auto& [key, value] : cfg) {
    try {
      if (key == "strategies") spec.strategies = detail::split_list(value);
      else if (key == "environments") spec.environments = detail::split_list(value);
      else if (key == "eps") spec.eps = detail::parse_reals(value);
      else if (key == "eps_geometric") {
        const auto g = detail::parse_reals(value);
        if (g.size() != 3) throw std::invalid_argument("eps_geometric expects start,end,count");
        spec.eps = geometric_grid(g[0], g[1], static_cast<std::int64_t>(std::llround(g[2])));
      }
      else if (key == "T") spec.T = value.empty() || value == "auto" ? std::nullopt : std::optional(std::stoll(value));
      else if (key == "T_floor") spec.T_floor = std::stoll(value);
      else if (key == "T_per_inv_eps") spec.T_per_inv_eps = std::stod(value);
      else if (key == "reps") spec.reps = std::stoll(value);
      else if (key == "seed") spec.seed = std::stoull(value);
      else if (key == "v1") spec.v1 = std::stod(value);
      else if (key == "schedule") spec.schedule = schedule_kind_from_string(value);
      else if (key == "rho") spec.rho = std::stod(value);
      else if (key == "alpha") spec.alpha = std::stod(value);
      else if (key == "eps_min") spec.eps_min = std::stod(value);
      else if (key == "spike_low") spec.spike_low = std::stod(value);
      else if (key == "spike_high_len") spec.spike_high_len = std::stoll(value);
      else if (key == "spike_low_len") spec.spike_low_len = std::stoll(value);
      else if (key == "script") spec.script = value;
      else if (key == "offset_variant") spec.offset_variant = offset_variant_from_string(value);
      else if (key == "raw") spec.raw = detail::parse_bool(value);
      else if (key == "threads") spec.threads = static_cast<unsigned>(std::stoul(value));
      else if (key == "csv") spec.csv = value;
      else if (key == "json") spec.json = value;
      else throw std::invalid_argument("unknown key");
    } catch (const std::exception& e) {
      throw std::invalid_argument("config key '" + key + "' = '" + value + "': " + e.what());
    }
  }
}

inline std::string to_config(const SweepSpec& spec) {
  std::ostringstream out;
  out << "strategies = " << detail::join(spec.strategies) << '\n'
      << "environments = " << detail::join(spec.environments) << '\n'
      << "eps = " << detail::join_reals(spec.eps) << '\n'
      << "T = " << (spec.T ? std::to_string(*spec.T) : "auto") << '\n'
      << "T_floor = " << spec.T_floor << '\n'
      << "T_per_inv_eps = " << format_real(spec.T_per_inv_eps) << '\n'
      << "reps = " << spec.reps << '\n'
      << "seed = " << spec.seed << '\n'
      << "v1 = " << format_real(spec.v1) << '\n'
      << "schedule = " << to_string(spec.schedule) << '\n'
      << "rho = " << format_real(spec.rho) << '\n'
      << "alpha = " << format_real(spec.alpha) << '\n'
      << "eps_min = " << format_real(spec.eps_min) << '\n'
      << "spike_low = " << format_real(spec.spike_low) << '\n'
      << "spike_high_len = " << spec.spike_high_len << '\n'
      << "spike_low_len = " << spec.spike_low_len << '\n'
      << "script = " << spec.script << '\n'
      << "offset_variant = " << to_string(spec.offset_variant) << '\n'
      << "raw = " << (spec.raw ? "true" : "false") << '\n'
      << "threads = " << spec.threads << '\n'
      << "csv = " << spec.csv << '\n'
      << "json = " << spec.json << '\n';
  return out.str();
}

/// EnvironmentSpec in the same key = value format (the schedule is written
/// out in full).
inline std::string environment_to_config(const EnvironmentSpec& env) {
  std::ostringstream out;
  out << "kind = " << to_string(env.kind) << '\n'
      << "v1 = " << format_real(env.v1) << '\n'
      << "adaptive_policy = " << env.params.adaptive_policy << '\n'
      << "script_path = " << env.params.script_path << '\n'
      << "script = " << detail::join_reals(env.params.script) << '\n'
      << "schedule = "
      << detail::join_reals(std::vector<double>(env.schedule.rates().begin(), env.schedule.rates().end())) << '\n';
  return out.str();
}

inline EnvironmentSpec environment_from_config(const ConfigMap& cfg) {
  EnvironmentSpec env;
  for (const auto& [key, value] : cfg) {
    if (key == "kind") env.kind = environment_kind_from_string(value);
    else if (key == "v1") env.v1 = std::stod(value);
    else if (key == "adaptive_policy") env.params.adaptive_policy = value;
    else if (key == "script_path") env.params.script_path = value;
    else if (key == "script") env.params.script = detail::parse_reals(value);
    else if (key == "schedule") env.schedule = RateSchedule(detail::parse_reals(value));
    else throw std::invalid_argument("environment config: unknown key '" + key + "'");
  }
  return env;
}

}  // namespace driftprice
