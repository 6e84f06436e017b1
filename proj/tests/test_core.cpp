#include <gtest/gtest.h>

#include <sstream>

#include "driftprice/core.hpp"
#include "driftprice/random.hpp"
#include "driftprice/trace_io.hpp"

using namespace driftprice;

namespace {

std::vector<StepRecord> steps_from(const std::vector<double>& values, const std::vector<double>& prices) {
  std::vector<StepRecord> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.push_back({static_cast<std::int64_t>(i + 1), values[i], prices[i], prices[i] <= values[i], std::nullopt});
  }
  return out;
}

}  // namespace

TEST(Feedback, SaleWhenPriceAtMostValue) {
  EXPECT_TRUE(feedback(0.6, 0.5));
  EXPECT_FALSE(feedback(0.4, 0.5));
  EXPECT_TRUE(feedback(0.5, 0.5));
}

TEST(Feedback, RejectsOutOfRangeInputs) {
  EXPECT_THROW(feedback(1.2, 0.5), std::invalid_argument);
  EXPECT_THROW(feedback(0.5, -0.1), std::invalid_argument);
}

TEST(Loss, RevenueLossSteps) {
  EXPECT_NEAR(revenue_loss_step(0.7, 0.5), 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(revenue_loss_step(0.3, 0.5), 0.3);
  EXPECT_DOUBLE_EQ(revenue_loss_step(0.5, 0.5), 0.0);
}

TEST(Loss, SymmetricLossSteps) {
  EXPECT_NEAR(symmetric_loss_step(0.7, 0.5), 0.2, 1e-15);
  EXPECT_NEAR(symmetric_loss_step(0.3, 0.5), 0.2, 1e-15);
}

TEST(Loss, RevenueLossIsOneOfTwoValues) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double v = rng.uniform01();
    const double p = rng.uniform01();
    const double loss = revenue_loss_step(v, p);
    EXPECT_TRUE(loss == v - p || loss == v);
    EXPECT_GE(loss, 0.0);
  }
}

TEST(Summarize, TwoStepExample) {
  const auto s = summarize(steps_from({0.6, 0.4}, {0.5, 0.5}));
  EXPECT_NEAR(s.avg_revenue_loss, 0.25, 1e-15);
  EXPECT_NEAR(s.avg_symmetric_loss, 0.1, 1e-15);
  EXPECT_NEAR(s.total_revenue, 0.5, 1e-15);
  EXPECT_NEAR(s.opt, 1.0, 1e-15);
}

TEST(Summarize, PerfectPricingHasZeroLoss) {
  Rng rng(1);
  std::vector<double> v(500);
  for (double& x : v) x = rng.uniform01();
  const auto s = summarize(steps_from(v, v));
  EXPECT_EQ(s.avg_revenue_loss, 0.0);
  EXPECT_EQ(s.avg_symmetric_loss, 0.0);
}

TEST(Summarize, EmptyIsRejected) {
  EXPECT_THROW(summarize(std::span<const StepRecord>{}), std::invalid_argument);
}

TEST(Summarize, TotalsAddOverConcatenation) {
  Rng rng(8);
  std::vector<double> v(400);
  std::vector<double> p(400);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = rng.uniform01();
    p[i] = rng.uniform01();
  }
  const auto all = steps_from(v, p);
  const std::span<const StepRecord> whole(all);
  const auto a = summarize(whole.first(150));
  const auto b = summarize(whole.subspan(150));
  const auto ab = summarize(whole);
  EXPECT_NEAR(a.total_revenue + b.total_revenue, ab.total_revenue, 1e-12);
  EXPECT_NEAR(a.opt + b.opt, ab.opt, 1e-12);
  EXPECT_NEAR(150 * a.avg_symmetric_loss + 250 * b.avg_symmetric_loss, 400 * ab.avg_symmetric_loss, 1e-10);
}

TEST(Horizon, NeedsAtLeastTwoSteps) {
  EXPECT_THROW(Horizon(1), std::invalid_argument);
  EXPECT_EQ(Horizon(2).steps(), 2);
}

TEST(RateSchedule, AverageAndQuadraticMean) {
  const RateSchedule s({0.1, 0.3});
  EXPECT_EQ(s.horizon().steps(), 3);
  EXPECT_NEAR(s.average(), 0.2, 1e-15);
  EXPECT_NEAR(s.quadratic_mean(), std::sqrt((0.01 + 0.09) / 3.0), 1e-15);
  EXPECT_DOUBLE_EQ(s.max_rate(), 0.3);
  EXPECT_FALSE(s.is_constant());
}

TEST(RateSchedule, AtIsZeroOutsideTransitions) {
  const RateSchedule s({0.1, 0.3});
  EXPECT_EQ(s.at(0), 0.0);
  EXPECT_EQ(s.at(1), 0.1);
  EXPECT_EQ(s.at(2), 0.3);
  EXPECT_EQ(s.at(3), 0.0);
}

TEST(RateSchedule, RejectsRatesOutsideUnitRange) {
  EXPECT_THROW(RateSchedule({0.1, 1.5}), std::invalid_argument);
  EXPECT_THROW(RateSchedule({-0.1}), std::invalid_argument);
  EXPECT_THROW(RateSchedule(std::vector<double>{}), std::invalid_argument);
}

TEST(RateSchedule, ConstantHasEqualEntries) {
  const auto s = RateSchedule::constant(0.25, Horizon(5));
  EXPECT_EQ(s.rates().size(), 4u);
  EXPECT_TRUE(s.is_constant());
  EXPECT_DOUBLE_EQ(s.average(), 0.25);
}

TEST(Interval, BasicGeometry) {
  const Interval iv(0.2, 0.6);
  EXPECT_DOUBLE_EQ(iv.width(), 0.4);
  EXPECT_DOUBLE_EQ(iv.midpoint(), 0.4);
  EXPECT_TRUE(iv.contains(0.2));
  EXPECT_TRUE(iv.contains(0.6));
  EXPECT_FALSE(iv.contains(0.61));
}

TEST(Interval, ClampedStaysInUnitRange) {
  const auto iv = Interval::clamped(-0.3, 1.4);
  EXPECT_EQ(iv, Interval::unit());
  const auto e = Interval(0.05, 0.95).expanded(0.1);
  EXPECT_EQ(e.lo(), 0.0);
  EXPECT_EQ(e.hi(), 1.0);
}

TEST(Interval, RejectsInvertedBounds) {
  EXPECT_THROW(Interval(0.6, 0.2), std::invalid_argument);
  EXPECT_THROW(Interval(-0.1, 0.2), std::invalid_argument);
}

TEST(PriceRole, StringRoundTrip) {
  for (auto r : {PriceRole::bisect, PriceRole::exploit, PriceRole::low_probe, PriceRole::high_probe,
                 PriceRole::midpoint, PriceRole::check, PriceRole::arm}) {
    EXPECT_EQ(price_role_from_string(to_string(r)), r);
  }
  EXPECT_THROW(price_role_from_string("nope"), std::invalid_argument);
}

TEST(EpisodeTrace, RejectsRateViolationWithIndex) {
  const RateSchedule s({0.1, 0.1, 0.1});
  auto steps = steps_from({0.5, 0.6, 0.9, 0.9}, {0.5, 0.5, 0.5, 0.5});
  try {
    EpisodeTrace(Horizon(4), s, steps, 0);
    FAIL() << "expected RateViolation";
  } catch (const RateViolation& e) {
    EXPECT_EQ(e.index(), 2);
  }
}

TEST(EpisodeTrace, RejectsInconsistentSaleBit) {
  auto steps = steps_from({0.5, 0.5}, {0.4, 0.4});
  steps[1].sold = false;
  EXPECT_THROW(EpisodeTrace(Horizon(2), RateSchedule({0.1}), steps, 0), std::invalid_argument);
}

TEST(EpisodeTrace, RejectsWrongLength) {
  EXPECT_THROW(EpisodeTrace(Horizon(3), RateSchedule({0.1, 0.1}), steps_from({0.5, 0.5}, {0.4, 0.4}), 0),
               std::invalid_argument);
}

TEST(FirstRateViolation, FindsEarliestStep) {
  const std::vector<double> v{0.5, 0.55, 0.4, 0.3};
  const RateSchedule s({0.1, 0.1, 0.1});
  const auto bad = first_rate_violation(v, s.rates());
  ASSERT_TRUE(bad.has_value());
  EXPECT_EQ(*bad, 2);
}

TEST(Random, SplitmixAndFnvAreStable) {
  // Reference values of the published algorithms.
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(fnv1a64(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xAF63DC4C8601EC8CULL);
}

TEST(Random, UniformAndIndexRanges) {
  Rng rng(42);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.index(7), 7u);
  }
}

TEST(TraceIo, JsonLinesRoundTripIsExact) {
  Rng rng(5);
  std::vector<double> v{0.3};
  std::vector<double> eps;
  for (int i = 1; i < 300; ++i) {
    eps.push_back(0.01 + 0.02 * rng.uniform01());
    v.push_back(clamp01(v.back() + (rng.coin() ? 1 : -1) * eps.back() * rng.uniform01()));
  }
  std::vector<StepRecord> steps;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double p = rng.uniform01();
    StepRecord s{static_cast<std::int64_t>(i + 1), v[i], p, p <= v[i], std::nullopt};
    if (i % 2 == 0) {
      s.note = StepAnnotation{Interval(0.1 * rng.uniform01(), 0.9 + 0.1 * rng.uniform01()), i % 4 == 0,
                              i % 3 == 0 ? std::optional<double>(rng.uniform01()) : std::nullopt, PriceRole::check};
    }
    steps.push_back(s);
  }
  const EpisodeTrace trace(Horizon(300), RateSchedule(eps), steps, 987654321ULL);
  std::stringstream buf;
  write_trace_jsonl(buf, trace);
  const EpisodeTrace back = read_trace_jsonl(buf);
  EXPECT_EQ(back, trace);
}

TEST(TraceIo, DigestMismatchIsRejected) {
  const EpisodeTrace trace(Horizon(2), RateSchedule({0.1}), steps_from({0.5, 0.55}, {0.5, 0.5}), 1);
  std::stringstream buf;
  write_trace_jsonl(buf, trace);
  std::string text = buf.str();
  const auto pos = text.find("\"schedule_digest\":\"") + 19;
  text[pos] = text[pos] == '0' ? '1' : '0';
  std::istringstream in(text);
  EXPECT_THROW(read_trace_jsonl(in), std::runtime_error);
}
