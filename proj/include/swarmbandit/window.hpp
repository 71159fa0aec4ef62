#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "swarmbandit/env.hpp"

namespace swb {

// Sliding-window width at time t: min(ceil(lambda * t^alpha), t).
Time window_width(Time t, double alpha, double lambda);

// Per-arm counts and means over the last window_width(t, alpha, lambda)
// observations. record() must be called once per step with t = last t + 1.
//
// Sums are never maintained by incremental float add/subtract: counts are
// exact integers, and a queried sum is recomputed by chronological summation
// over that arm's in-window rewards (cached until the arm's window content
// changes). This keeps results bit-identical to a from-scratch recount.
class WindowStats {
 public:
  WindowStats(int num_arms, double alpha, double lambda, Time horizon);

  void record(Time t, int arm, double reward);

  int num_arms() const { return static_cast<int>(arms_.size()); }
  Time current_time() const { return now_; }
  // Oldest observation time still inside the window; nullopt before the first record.
  std::optional<Time> oldest_time() const;

  std::int64_t count(int arm) const { return arms_[arm].count; }
  std::int64_t total_count() const { return total_; }

  double windowed_sum(int arm) const;
  // nullopt when the arm has no in-window observations.
  std::optional<double> windowed_mean(int arm) const;

  // sqrt((1+alpha) * ln t / n_arm) where t is the caller's decision time
  // (stats hold state through t-1). +infinity when n_arm = 0.
  double confidence_radius(int arm, Time t) const;
  double ucb(int arm, Time t) const;  // +infinity when unplayed
  double lcb(int arm, Time t) const;  // -infinity when unplayed

  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }

 private:
  struct ArmRing {
    std::vector<double> rewards;  // ring buffer, chronological
    std::size_t head = 0;
    std::int64_t count = 0;
    mutable double cached_sum = 0.0;
    mutable bool dirty = false;
  };

  void evict_one();

  double alpha_;
  double lambda_;
  Time now_ = 0;
  Time oldest_ = 1;  // time of the oldest retained observation
  std::int64_t total_ = 0;
  std::size_t capacity_;
  std::vector<int> arm_of_;  // ring indexed by time % capacity_
  std::vector<ArmRing> arms_;
};

}  // namespace swb
