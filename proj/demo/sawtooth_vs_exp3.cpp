// EXP3 over a fixed price grid against the sawtooth value path, next to the
// interval-tracking seller s3 on the same path.

#include <cstdio>

#include "driftprice/driftprice.hpp"

int main() {
  using namespace driftprice;
  const double eps = 0.05;
  const Horizon horizon(50000);

  EnvironmentSpec env;
  env.kind = EnvironmentKind::sawtooth;
  env.schedule = RateSchedule::constant(eps, horizon);

  const auto values = sawtooth(eps, horizon);
  const auto bench = oracle::clairvoyant_opt(values, eps);
  std::printf("first-best per step      %.4f\n", bench.first_best / horizon.as_double());
  std::printf("best fixed price         %.4f (revenue per step %.4f)\n", bench.best_fixed_price,
              bench.best_fixed_revenue / horizon.as_double());

  for (const char* id : {"s15", "s3"}) {
    EpisodeConfig config;
    config.environment = env;
    config.strategy = id;
    config.seed = 7;
    const LossSummary s = summarize(run_episode(config));
    std::printf("%-4s revenue loss per step %.4f\n", id, s.avg_revenue_loss);
  }
}
