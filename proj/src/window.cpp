#include "swarmbandit/window.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace swb {

Time window_width(Time t, double alpha, double lambda) {
  if (t < 1) throw std::invalid_argument("window_width: t must be >= 1");
  if (lambda <= 0.0) throw std::invalid_argument("window_width: lambda must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("window_width: alpha must lie in (0, 1]");
  double raw = std::ceil(lambda * std::pow(static_cast<double>(t), alpha));
  if (raw >= static_cast<double>(t)) return t;
  return static_cast<Time>(raw);
}

WindowStats::WindowStats(int num_arms, double alpha, double lambda, Time horizon)
    : alpha_(alpha), lambda_(lambda) {
  if (num_arms < 1) throw std::invalid_argument("WindowStats: need at least one arm");
  if (horizon < 1) throw std::invalid_argument("WindowStats: need horizon >= 1");
  // Width is nondecreasing in t, so the width at the horizon bounds every window.
  capacity_ = static_cast<std::size_t>(window_width(horizon, alpha, lambda));
  arm_of_.assign(capacity_, -1);
  arms_.resize(num_arms);
  for (auto& a : arms_) a.rewards.assign(capacity_, 0.0);
}

void WindowStats::evict_one() {
  int arm = arm_of_[static_cast<std::size_t>(oldest_) % capacity_];
  ArmRing& ring = arms_[arm];
  ring.head = (ring.head + 1) % capacity_;
  --ring.count;
  ring.dirty = true;
  --total_;
  ++oldest_;
}

void WindowStats::record(Time t, int arm, double reward) {
  if (t != now_ + 1)
    throw std::invalid_argument("WindowStats::record: steps must be recorded consecutively");
  if (arm < 0 || arm >= num_arms())
    throw std::invalid_argument("WindowStats::record: arm out of range");
  Time cutoff = t - window_width(t, alpha_, lambda_);
  while (total_ > 0 && oldest_ <= cutoff) evict_one();
  ArmRing& ring = arms_[arm];
  ring.rewards[(ring.head + static_cast<std::size_t>(ring.count)) % capacity_] = reward;
  ++ring.count;
  ring.dirty = true;
  arm_of_[static_cast<std::size_t>(t) % capacity_] = arm;
  ++total_;
  now_ = t;
}

std::optional<Time> WindowStats::oldest_time() const {
  if (total_ == 0) return std::nullopt;
  return oldest_;
}

double WindowStats::windowed_sum(int arm) const {
  const ArmRing& ring = arms_[arm];
  if (ring.dirty) {
    double s = 0.0;
    std::size_t idx = ring.head;
    for (std::int64_t i = 0; i < ring.count; ++i) {
      s += ring.rewards[idx];
      if (++idx == capacity_) idx = 0;
    }
    ring.cached_sum = s;
    ring.dirty = false;
  }
  return ring.cached_sum;
}

std::optional<double> WindowStats::windowed_mean(int arm) const {
  if (arms_[arm].count == 0) return std::nullopt;
  return windowed_sum(arm) / static_cast<double>(arms_[arm].count);
}

double WindowStats::confidence_radius(int arm, Time t) const {
  std::int64_t n = arms_[arm].count;
  if (n == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt((1.0 + alpha_) * std::log(static_cast<double>(t)) / static_cast<double>(n));
}

double WindowStats::ucb(int arm, Time t) const {
  if (arms_[arm].count == 0) return std::numeric_limits<double>::infinity();
  return *windowed_mean(arm) + confidence_radius(arm, t);
}

double WindowStats::lcb(int arm, Time t) const {
  if (arms_[arm].count == 0) return -std::numeric_limits<double>::infinity();
  return *windowed_mean(arm) - confidence_radius(arm, t);
}

}  // namespace swb
