#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "driftprice/random.hpp"
#include "driftprice/strategy.hpp"

namespace driftprice {

/// s15: EXP3 over the price grid {eps, 2 eps, ..., m eps}, m = round(1/eps),
/// with reward p_t * sigma_t.
class Exp3Strategy final : public PricingStrategy {
 public:
  static constexpr double kRenormalizeAbove = 1e200;

  Exp3Strategy(double eps, Horizon horizon, std::uint64_t seed)
      : eps_(eps), rng_(seed) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("exp3 needs eps in (0,1]");
    m_ = round_count(1.0 / eps);
    const double m = static_cast<double>(m_);
    eta_ = std::sqrt(std::log(m) / (horizon.as_double() * m));
    weights_.assign(static_cast<std::size_t>(m_), 1.0);
    q_.resize(weights_.size());
    refresh();
  }

  const Quote& quote() const override { return quote_; }

  void observe(bool sold) override {
    const double reward = sold ? quote_.price : 0.0;
    if (reward > 0.0) {
      const auto i = static_cast<std::size_t>(arm_);
      weights_[i] *= std::exp(eta_ * reward / (static_cast<double>(m_) * q_[i]));
      const double top = *std::max_element(weights_.begin(), weights_.end());
      if (top > kRenormalizeAbove) {
        for (double& w : weights_) w /= top;
      }
    }
    refresh();
  }

  std::int64_t arm_count() const noexcept { return m_; }
  double learning_rate() const noexcept { return eta_; }
  std::span<const double> probabilities() const noexcept { return q_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::int64_t current_arm() const noexcept { return arm_; }
  double arm_price(std::int64_t i) const noexcept { return std::min(1.0, static_cast<double>(i + 1) * eps_); }

 private:
  void refresh() {
    double total = 0.0;
    for (double w : weights_) total += w;
    const double floor = eta_ / static_cast<double>(m_);
    for (std::size_t i = 0; i < weights_.size(); ++i) q_[i] = (1.0 - eta_) * weights_[i] / total + floor;

    const double u = rng_.uniform01();
    double acc = 0.0;
    arm_ = m_ - 1;
    for (std::size_t i = 0; i < q_.size(); ++i) {
      acc += q_[i];
      if (u < acc) {
        arm_ = static_cast<std::int64_t>(i);
        break;
      }
    }
    quote_ = Quote{arm_price(arm_), PriceRole::arm, std::nullopt, false, std::nullopt};
  }

  double eps_;
  Rng rng_;
  std::int64_t m_ = 1;
  double eta_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> q_;
  std::int64_t arm_ = 0;
  Quote quote_;
};

}  // namespace driftprice
