// driftprice: run single episodes, eps sweeps, slope fits and trace audits.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "driftprice/driftprice.hpp"

using namespace driftprice;

namespace {

struct RunArgs {
  std::string strategy = "s1";
  std::string env = "martingale";
  double eps = 0.01;
  std::int64_t T = 10000;
  std::uint64_t seed = 1;
  double v1 = 0.5;
  std::string schedule = "constant";
  double rho = 0.999;
  double alpha = 0.5;
  double eps_min = 1.0 / 4096.0;
  double spike_low = 1.0 / 1024.0;
  std::int64_t spike_high_len = 4;
  std::int64_t spike_low_len = 1024;
  std::string script;
  std::string offset_variant = "standard";
  std::string trace;
};

int cmd_run(const RunArgs& a) {
  SweepSpec shape;
  shape.schedule = schedule_kind_from_string(a.schedule);
  shape.rho = a.rho;
  shape.alpha = a.alpha;
  shape.eps_min = a.eps_min;
  shape.spike_low = a.spike_low;
  shape.spike_high_len = a.spike_high_len;
  shape.spike_low_len = a.spike_low_len;

  EpisodeConfig config;
  config.environment.kind = environment_kind_from_string(a.env);
  config.environment.v1 = a.v1;
  config.environment.params.script_path = a.script;
  if (config.environment.kind == EnvironmentKind::scripted) {
    if (a.script.empty()) throw std::invalid_argument("scripted environment needs --script");
    config.environment.params.script = load_values_csv(a.script);
  }
  const std::int64_t T = config.environment.kind == EnvironmentKind::scripted
                             ? static_cast<std::int64_t>(config.environment.params.script.size())
                             : a.T;
  config.environment.schedule = build_schedule(shape, a.eps, Horizon(T));
  config.strategy = canonical_strategy_id(a.strategy);
  config.options.offset_variant = offset_variant_from_string(a.offset_variant);
  config.seed = a.seed;

  const EpisodeTrace trace = run_episode(config);
  const LossSummary s = summarize(trace);
  if (!a.trace.empty()) save_trace(a.trace, trace);
  const StrategyInfo& info = strategy_info(config.strategy);
  nlohmann::json out{{"strategy", config.strategy},
                     {"environment", std::string(to_string(config.environment.kind))},
                     {"T", T},
                     {"seed", a.seed},
                     {"eps_bar", trace.schedule().average()},
                     {"metric", std::string(to_string(info.metric))},
                     {"loss", select_loss(s, info.metric)},
                     {"avg_revenue_loss", s.avg_revenue_loss},
                     {"avg_symmetric_loss", s.avg_symmetric_loss},
                     {"total_revenue", s.total_revenue},
                     {"opt", s.opt}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct SweepArgs {
  std::string config;
  std::map<std::string, std::string> overrides;
  bool progress = false;
};

int cmd_sweep(SweepArgs& a) {
  ConfigMap cfg;
  if (!a.config.empty()) cfg = load_config(a.config);
  for (const auto& [k, v] : a.overrides) {
    if (!v.empty()) cfg[k] = v;
  }
  SweepSpec spec;
  apply_config(cfg, spec);
  const SweepReport report = run_sweep(spec, a.progress);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : report.failures) std::cerr << "failed: " << f << '\n';
  if (spec.csv.empty()) {
    write_report_csv(std::cout, report);
  } else {
    save_report(report, spec.csv, spec.json);
    std::cerr << "wrote " << spec.csv << " and " << (spec.json.empty() ? sibling_json_path(spec.csv) : spec.json)
              << '\n';
  }
  return report.failures.empty() ? 0 : 2;
}

int cmd_fit(const std::string& csv_path, bool as_json) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open '" + csv_path + "'");
  SweepReport report = read_report_csv(in);
  attach_slopes(report);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  if (as_json) {
    std::cout << slopes_to_json(report).dump(2) << '\n';
    return 0;
  }
  std::printf("%-16s %-16s %8s %10s %8s %21s %6s\n", "strategy", "environment", "slope", "intercept", "stderr",
              "95% interval", "points");
  for (const auto& s : report.slopes) {
    std::printf("%-16s %-16s %8.4f %10.4f %8.4f [%9.4f, %9.4f] %6lld\n", s.strategy.c_str(), s.environment.c_str(),
                s.fit.slope, s.fit.intercept, s.fit.stderr_slope, s.fit.ci_low, s.fit.ci_high,
                static_cast<long long>(s.fit.points));
  }
  return 0;
}

int cmd_list() {
  std::printf("strategies:\n");
  for (const auto& s : kStrategies) {
    std::printf("  %-4s %-26s %-14s %-10s %s\n", std::string(s.id).c_str(), std::string(s.alias).c_str(),
                std::string(to_string(s.knowledge)).c_str(), std::string(to_string(s.metric)).c_str(),
                std::string(s.summary).c_str());
  }
  std::printf("environments:\n");
  std::printf("  martingale      +/- eps_t with equal probability, zero step at the boundary\n");
  std::printf("  phase_monotone  monotone runs of round(eps^-1/2) steps, random direction per run\n");
  std::printf("  sawtooth        periodic ramp j*eps up, 1-(j-1)*eps down, period 2 round(1/eps)\n");
  std::printf("  constant        v_t = v1\n");
  std::printf("  scripted        values read from a one-column CSV (--script)\n");
  std::printf("  adaptive        moves v away from the last price by the full rate\n");
  std::printf("schedules: constant, geometric, polynomial, spiky\n");
  return 0;
}

int cmd_audit(const std::string& path) {
  const EpisodeTrace trace = load_trace(path);
  const auto violations = oracle::audit_containment(trace);
  nlohmann::json out{{"T", trace.horizon().steps()}, {"containment_violations", oracle::violations_to_json(violations)}};
  bool all_annotated = true;
  for (const auto& s : trace.steps()) all_annotated = all_annotated && s.note.has_value();
  if (all_annotated) {
    const auto w = oracle::width_recursion_check(trace);
    out["width_recursion"] = {{"passed", w.passed}, {"total_width", w.total_width}, {"bound", w.bound}};
    if (w.first_failure) out["width_recursion"]["first_failure"] = *w.first_failure;
  }
  const LossSummary s = summarize(trace);
  out["avg_revenue_loss"] = s.avg_revenue_loss;
  out["avg_symmetric_loss"] = s.avg_symmetric_loss;
  std::cout << out.dump(2) << '\n';
  return violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posted-price strategies against a drifting buyer value"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one episode and print its losses");
  run_cmd->add_option("-s,--strategy", run.strategy, "Strategy id or alias")->capture_default_str();
  run_cmd->add_option("-e,--env", run.env, "Environment kind")->capture_default_str();
  run_cmd->add_option("--eps", run.eps, "Rate (eps_1 or spike rate for non-constant schedules)")->capture_default_str();
  run_cmd->add_option("-T,--horizon", run.T, "Number of steps")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Episode seed")->capture_default_str();
  run_cmd->add_option("--v1", run.v1, "Initial value")->capture_default_str();
  run_cmd->add_option("--schedule", run.schedule, "constant, geometric, polynomial or spiky")->capture_default_str();
  run_cmd->add_option("--rho", run.rho, "Geometric decay factor")->capture_default_str();
  run_cmd->add_option("--alpha", run.alpha, "Polynomial decay exponent")->capture_default_str();
  run_cmd->add_option("--eps-min", run.eps_min, "Floor for decaying schedules")->capture_default_str();
  run_cmd->add_option("--spike-low", run.spike_low, "Low rate of the spiky schedule")->capture_default_str();
  run_cmd->add_option("--spike-high-len", run.spike_high_len, "High block length")->capture_default_str();
  run_cmd->add_option("--spike-low-len", run.spike_low_len, "Low block length")->capture_default_str();
  run_cmd->add_option("--script", run.script, "Value file for the scripted environment");
  run_cmd->add_option("--offset-variant", run.offset_variant, "standard, polylog or literal")->capture_default_str();
  run_cmd->add_option("--trace", run.trace, "Write the trace as JSON lines");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an eps sweep and write the CSV report");
  sweep_cmd->add_option("-c,--config", sweep.config, "key = value config file");
  for (const char* key : {"strategies", "environments", "eps", "eps_geometric", "T", "T_floor", "T_per_inv_eps", "reps",
                          "seed", "v1", "schedule", "rho", "alpha", "eps_min", "spike_low", "spike_high_len",
                          "spike_low_len", "script", "offset_variant", "raw", "threads", "csv", "json"}) {
    std::string flag = std::string("--") + key;
    for (auto& ch : flag) if (ch == '_') ch = '-';
    sweep_cmd->add_option(flag, sweep.overrides[key], std::string("Overrides config key ") + key);
  }
  sweep_cmd->add_flag("--progress", sweep.progress, "Report each cell on stderr");

  std::string fit_csv;
  bool fit_json = false;
  auto* fit_cmd = app.add_subcommand("fit", "Fit log-log slopes to an existing report CSV");
  fit_cmd->add_option("csv", fit_csv, "Report CSV")->required();
  fit_cmd->add_flag("--json", fit_json, "Print JSON instead of a table");

  auto* list_cmd = app.add_subcommand("list", "List strategies and environments");

  std::string audit_path;
  auto* audit_cmd = app.add_subcommand("audit", "Check a saved trace against its recorded intervals");
  audit_cmd->add_option("trace", audit_path, "Trace file (JSON lines)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*sweep_cmd) return cmd_sweep(sweep);
    if (*fit_cmd) return cmd_fit(fit_csv, fit_json);
    if (*list_cmd) return cmd_list();
    if (*audit_cmd) return cmd_audit(audit_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
