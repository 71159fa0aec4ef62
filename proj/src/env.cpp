#include "swarmbandit/env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace swb {

std::vector<std::string> validate(const EnvConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.num_arms < 1) errors.push_back("arms must be >= 1");
  if (cfg.num_players < 1) errors.push_back("players must be >= 1");
  if (cfg.num_players > cfg.num_arms) errors.push_back("players must not exceed arms");
  if (cfg.horizon < cfg.num_arms)
    errors.push_back("horizon must be >= arms (initialization selects each arm once)");
  if (!(cfg.nu >= 0.0 && cfg.nu < 1.0)) errors.push_back("nu must lie in [0, 1)");
  if (static_cast<int>(cfg.mean_pool.size()) < cfg.num_arms)
    errors.push_back("mean pool must hold at least as many values as arms");
  for (double v : cfg.mean_pool) {
    if (!(v >= 0.0 && v <= 1.0)) {
      errors.push_back("mean pool values must lie in [0, 1]");
      break;
    }
  }
  for (std::size_t i = 0; i < cfg.mean_pool.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.mean_pool.size(); ++j)
      if (cfg.mean_pool[i] == cfg.mean_pool[j]) {
        errors.push_back("mean pool values must be pairwise distinct");
        i = cfg.mean_pool.size();
        break;
      }
  if (cfg.reward_model.kind == RewardModel::Kind::truncated_gaussian &&
      cfg.reward_model.sigma < 0.0)
    errors.push_back("reward model sigma must be >= 0");
  return errors;
}

std::vector<Time> generate_breakpoints(double nu, Time horizon) {
  std::vector<Time> out;
  double prev = std::floor(std::pow(1.0, nu));
  for (Time t = 2; t <= horizon; ++t) {
    double cur = std::floor(std::pow(static_cast<double>(t), nu));
    if (cur > prev) out.push_back(t);
    prev = cur;
  }
  return out;
}

std::vector<double> assign_means(const std::vector<double>& pool, int num_arms, Rng& rng) {
  if (static_cast<int>(pool.size()) < num_arms)
    throw std::invalid_argument("assign_means: pool smaller than arm count");
  std::vector<double> deck = pool;
  std::vector<double> out(num_arms);
  for (int i = 0; i < num_arms; ++i) {
    std::size_t j = i + rng.bounded(deck.size() - i);
    std::swap(deck[i], deck[j]);
    out[i] = deck[i];
  }
  return out;
}

MeanTimeline::MeanTimeline(int num_arms, Time horizon, std::vector<Time> breakpoints,
                           std::vector<std::vector<double>> segment_means)
    : num_arms_(num_arms),
      horizon_(horizon),
      breakpoints_(std::move(breakpoints)),
      segment_means_(std::move(segment_means)) {
  if (num_arms_ < 1) throw std::invalid_argument("MeanTimeline: need at least one arm");
  if (horizon_ < 1) throw std::invalid_argument("MeanTimeline: need horizon >= 1");
  if (segment_means_.size() != breakpoints_.size() + 1)
    throw std::invalid_argument("MeanTimeline: need one mean vector per segment");
  Time prev = 1;
  for (Time b : breakpoints_) {
    if (b <= prev || b > horizon_)
      throw std::invalid_argument("MeanTimeline: breakpoints must be ascending in (1, T]");
    prev = b;
  }
  delta_min_ = std::numeric_limits<double>::infinity();
  for (const auto& means : segment_means_) {
    if (static_cast<int>(means.size()) != num_arms_)
      throw std::invalid_argument("MeanTimeline: mean vector size must equal arm count");
    for (int i = 0; i < num_arms_; ++i)
      for (int j = i + 1; j < num_arms_; ++j) {
        double gap = std::abs(means[i] - means[j]);
        if (gap == 0.0)
          throw std::invalid_argument("MeanTimeline: segment means must be pairwise distinct");
        delta_min_ = std::min(delta_min_, gap);
      }
  }
  if (num_arms_ == 1) delta_min_ = 1.0;  // no pairs; any positive sentinel works
  rankings_.reserve(segment_means_.size());
  for (const auto& means : segment_means_) {
    std::vector<int> order(num_arms_);
    for (int i = 0; i < num_arms_; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (means[a] != means[b]) return means[a] > means[b];
      return a < b;
    });
    rankings_.push_back(std::move(order));
  }
}

int MeanTimeline::segment_index(Time t) const {
  // First segment whose start exceeds t, minus one.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return static_cast<int>(it - breakpoints_.begin());
}

Time MeanTimeline::segment_start(int seg) const { return seg == 0 ? 1 : breakpoints_[seg - 1]; }

Time MeanTimeline::segment_end(int seg) const {
  return seg == num_segments() - 1 ? horizon_ : breakpoints_[seg] - 1;
}

double MeanTimeline::mean_at(int arm, Time t) const { return segment_means_[segment_index(t)][arm]; }

MeanTimeline build_timeline(const EnvConfig& cfg, Rng& env_rng) {
  auto bps = generate_breakpoints(cfg.nu, cfg.horizon);
  std::vector<std::vector<double>> means;
  means.reserve(bps.size() + 1);
  for (std::size_t s = 0; s < bps.size() + 1; ++s)
    means.push_back(assign_means(cfg.mean_pool, cfg.num_arms, env_rng));
  return MeanTimeline(cfg.num_arms, cfg.horizon, std::move(bps), std::move(means));
}

double sample_reward(const MeanTimeline& tl, int arm, Time t, const RewardModel& model,
                     Rng& rng) {
  double mu = tl.mean_at(arm, t);
  switch (model.kind) {
    case RewardModel::Kind::bernoulli:
      return rng.bernoulli(mu) ? 1.0 : 0.0;
    case RewardModel::Kind::truncated_gaussian: {
      if (model.sigma == 0.0) return std::clamp(mu, 0.0, 1.0);
      return std::clamp(rng.gaussian(mu, model.sigma), 0.0, 1.0);
    }
  }
  throw std::logic_error("sample_reward: unknown reward model");
}

void write_env_dump(std::ostream& os, const MeanTimeline& tl, int num_players, double nu,
                    std::uint64_t seed) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", nu);
  os << tl.num_arms() << ' ' << num_players << ' ' << tl.horizon() << ' ' << buf << ' ' << seed
     << '\n';
  for (int s = 0; s < tl.num_segments(); ++s) {
    os << tl.segment_start(s) << ' ' << tl.segment_end(s);
    for (double mu : tl.segment_means(s)) {
      std::snprintf(buf, sizeof buf, "%.6f", mu);
      os << ' ' << buf;
    }
    os << '\n';
  }
}

}  // namespace swb
