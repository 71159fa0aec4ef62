#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "swarmbandit/rng.hpp"

namespace swb {

using Time = std::int64_t;

struct RewardModel {
  enum class Kind { bernoulli, truncated_gaussian };
  Kind kind = Kind::bernoulli;
  double sigma = 0.0;  // truncated_gaussian only
};

struct EnvConfig {
  int num_arms = 6;
  int num_players = 3;
  Time horizon = 100000;
  double nu = 0.3;
  std::vector<double> mean_pool = {0.05, 0.22, 0.39, 0.56, 0.73, 0.90};
  RewardModel reward_model;
};

// Returns config problems, one message each; empty means valid.
std::vector<std::string> validate(const EnvConfig& cfg);

// Times t in [2, T] where floor(t^nu) exceeds floor((t-1)^nu), ascending.
std::vector<Time> generate_breakpoints(double nu, Time horizon);

// N distinct means drawn from the pool without replacement.
std::vector<double> assign_means(const std::vector<double>& pool, int num_arms, Rng& rng);

// Piecewise-constant arm means. Segment s covers [segment_start(s), segment_end(s)];
// new means take effect at the breakpoint itself.
class MeanTimeline {
 public:
  MeanTimeline(int num_arms, Time horizon, std::vector<Time> breakpoints,
               std::vector<std::vector<double>> segment_means);

  int num_arms() const { return num_arms_; }
  Time horizon() const { return horizon_; }
  const std::vector<Time>& breakpoints() const { return breakpoints_; }
  int num_segments() const { return static_cast<int>(segment_means_.size()); }

  int segment_index(Time t) const;
  Time segment_start(int seg) const;
  Time segment_end(int seg) const;
  const std::vector<double>& segment_means(int seg) const { return segment_means_[seg]; }

  double mean_at(int arm, Time t) const;

  // Arms of segment seg sorted by mean descending (ties impossible: means are
  // pairwise distinct within a segment).
  const std::vector<int>& ranking(int seg) const { return rankings_[seg]; }
  // True rank-r arm at time t, r in [0, N).
  int rank_arm(Time t, int rank) const { return rankings_[segment_index(t)][rank]; }

  // Minimum pairwise mean gap over all segments.
  double delta_min() const { return delta_min_; }

 private:
  int num_arms_;
  Time horizon_;
  std::vector<Time> breakpoints_;
  std::vector<std::vector<double>> segment_means_;
  std::vector<std::vector<int>> rankings_;
  double delta_min_;
};

// Breakpoints from nu, fresh mean assignment at t=1 and every breakpoint.
// Consumes only the given rng, so a fixed seed reproduces the timeline exactly.
MeanTimeline build_timeline(const EnvConfig& cfg, Rng& env_rng);

// One reward realization for (arm, t). Bernoulli pays {0,1} with mean
// mu_arm(t); truncated_gaussian clamps N(mu, sigma^2) to [0,1] (sigma=0 pays
// mu exactly without consuming randomness).
double sample_reward(const MeanTimeline& tl, int arm, Time t, const RewardModel& model, Rng& rng);

// Header "N M T nu seed", then one line per segment:
// "t_start t_end mu_1 ... mu_N" with means to 6 decimal places.
void write_env_dump(std::ostream& os, const MeanTimeline& tl, int num_players, double nu,
                    std::uint64_t seed);

}  // namespace swb
