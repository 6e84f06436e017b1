// Plugging a hand-written adaptive adversary into the engine. This one pushes
// the value toward whichever side of the last price hurts the seller most.

#include <cstdio>

#include "driftprice/driftprice.hpp"

int main() {
  using namespace driftprice;
  const Horizon horizon(20000);
  const RateSchedule schedule = RateSchedule::constant(1.0 / 128.0, horizon);

  AdaptiveAdversary adversary = [](const RoundHistory& h) {
    // After a sale drift up (the seller left money on the table), after a
    // no-sale drift down (the seller overshot).
    const bool sold = !h.sold.empty() && h.sold.back() != 0;
    return clamp01(h.previous_value + (sold ? h.previous_rate : -h.previous_rate));
  };

  for (const char* id : {"s1", "s5", "s11", "s3"}) {
    AdaptiveEnvironment env(schedule, 0.5, adversary);
    StrategyInput input{horizon, knowledge_for(id, schedule), 11, {}};
    auto strategy = make_strategy(id, input);
    const EpisodeTrace trace = run_episode(env, *strategy, 11);
    const LossSummary s = summarize(trace);
    std::printf("%-4s symmetric %.5f  revenue %.5f  containment violations %zu\n", id, s.avg_symmetric_loss,
                s.avg_revenue_loss, oracle::audit_containment(trace).size());
  }
}
