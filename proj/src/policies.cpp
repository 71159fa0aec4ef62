#include "swarmbandit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swb {

const char* policy_kind_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::ucb: return "ucb";
    case PolicyKind::dlp: return "dlp";
    case PolicyKind::sw_ucb_sharp: return "sw-ucb-sharp";
    case PolicyKind::rr_sw_ucb_sharp: return "rr-sw-ucb-sharp";
    case PolicyKind::sw_dlp: return "sw-dlp";
    case PolicyKind::oracle: return "oracle";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy_kind(const std::string& name) {
  for (PolicyKind k : {PolicyKind::ucb, PolicyKind::dlp, PolicyKind::sw_ucb_sharp,
                       PolicyKind::rr_sw_ucb_sharp, PolicyKind::sw_dlp, PolicyKind::oracle})
    if (name == policy_kind_name(k)) return k;
  return std::nullopt;
}

int init_arm(Time t, int player, int num_arms) {
  return static_cast<int>((t + player - 1) % num_arms);
}

namespace {

// Candidates holding the exact best value; |ties| > 1 only on exact float equality.
template <typename Better>
int pick(std::span<const double> values, Rng* rng, Better better) {
  int best = 0;
  int ties = 1;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (better(values[i], values[best])) {
      best = i;
      ties = 1;
    } else if (values[i] == values[best]) {
      ++ties;
    }
  }
  if (ties == 1 || rng == nullptr) return best;
  std::uint64_t skip = rng->bounded(static_cast<std::uint64_t>(ties));
  for (int i = best; i < static_cast<int>(values.size()); ++i)
    if (values[i] == values[best] && skip-- == 0) return i;
  return best;
}

}  // namespace

int pick_max(std::span<const double> values, Rng* rng) {
  return pick(values, rng, [](double a, double b) { return a > b; });
}

int pick_min(std::span<const double> values, Rng* rng) {
  return pick(values, rng, [](double a, double b) { return a < b; });
}

std::vector<int> top_m_arms(std::span<const double> values, int m, Rng* rng) {
  int n = static_cast<int>(values.size());
  if (m < 1 || m > n) throw std::invalid_argument("top_m_arms: need 1 <= m <= arm count");
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  if (rng != nullptr && m < n && values[order[m - 1]] == values[order[m]]) {
    // The threshold value straddles the boundary: fill the remaining slots
    // uniformly from the tied group instead of by index.
    double thresh = values[order[m - 1]];
    int lo = m - 1;
    while (lo > 0 && values[order[lo - 1]] == thresh) --lo;
    int hi = m;
    while (hi < n && values[order[hi]] == thresh) ++hi;
    for (int i = lo; i < m; ++i) {
      std::uint64_t j = i + rng->bounded(static_cast<std::uint64_t>(hi - i));
      std::swap(order[i], order[static_cast<int>(j)]);
    }
  }
  std::vector<int> out(order.begin(), order.begin() + m);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Full-history counts and sums for the stationary baselines. Append-only, so
// incremental float sums follow the chronological order exactly.
struct FullStats {
  std::vector<std::int64_t> counts;
  std::vector<double> sums;

  explicit FullStats(int num_arms) : counts(num_arms, 0), sums(num_arms, 0.0) {}

  void add(int arm, double reward) {
    ++counts[arm];
    sums[arm] += reward;
  }
  double ucb(int arm, Time t) const {
    if (counts[arm] == 0) return std::numeric_limits<double>::infinity();
    double n = static_cast<double>(counts[arm]);
    return sums[arm] / n + std::sqrt(2.0 * std::log(static_cast<double>(t)) / n);
  }
  double lcb(int arm, Time t) const {
    if (counts[arm] == 0) return -std::numeric_limits<double>::infinity();
    double n = static_cast<double>(counts[arm]);
    return sums[arm] / n - std::sqrt(2.0 * std::log(static_cast<double>(t)) / n);
  }
};

class BasePolicy : public Policy {
 public:
  explicit BasePolicy(const PolicyConfig& cfg)
      : cfg_(cfg),
        tie_rng_(cfg.tie_break == TieBreak::seeded_random
                     ? std::make_unique<Rng>(cfg.tie_seed)
                     : nullptr) {}

 protected:
  Rng* tie_rng() { return tie_rng_.get(); }

  PolicyConfig cfg_;
  std::vector<int> top_;

 private:
  std::unique_ptr<Rng> tie_rng_;
};

class UcbPolicy final : public BasePolicy {
 public:
  explicit UcbPolicy(const PolicyConfig& cfg) : BasePolicy(cfg), stats_(cfg.num_arms) {}

  int select(Time t) override {
    if (t <= cfg_.num_arms) return init_arm(t, cfg_.player, cfg_.num_arms);
    std::vector<double> u(cfg_.num_arms);
    for (int i = 0; i < cfg_.num_arms; ++i) u[i] = stats_.ucb(i, t);
    int arm = pick_max(u, tie_rng());
    top_.assign(1, arm);
    return arm;
  }
  void observe(Time, int arm, double reward) override { stats_.add(arm, reward); }
  std::span<const int> top_set() const override { return top_; }

 private:
  FullStats stats_;
};

class DlpPolicy final : public BasePolicy {
 public:
  explicit DlpPolicy(const PolicyConfig& cfg) : BasePolicy(cfg), stats_(cfg.num_arms) {}

  int select(Time t) override {
    if (t <= cfg_.num_arms) return init_arm(t, cfg_.player, cfg_.num_arms);
    std::vector<double> u(cfg_.num_arms), l(cfg_.num_arms);
    for (int i = 0; i < cfg_.num_arms; ++i) {
      u[i] = stats_.ucb(i, t);
      l[i] = stats_.lcb(i, t);
    }
    top_ = top_m_arms(u, cfg_.player + 1, tie_rng());
    return select_min_lcb(top_, l, tie_rng());
  }
  void observe(Time, int arm, double reward) override { stats_.add(arm, reward); }
  std::span<const int> top_set() const override { return top_; }

  static int select_min_lcb(const std::vector<int>& set, std::span<const double> lcbs, Rng* rng) {
    std::vector<double> vals(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) vals[i] = lcbs[set[i]];
    return set[pick_min(vals, rng)];
  }

 private:
  FullStats stats_;
};

class SwUcbSharpPolicy final : public BasePolicy {
 public:
  explicit SwUcbSharpPolicy(const PolicyConfig& cfg)
      : BasePolicy(cfg),
        stats_(cfg.num_arms, window_alpha(cfg.nu), cfg.lambda, cfg.horizon) {}

  int select(Time t) override {
    if (t <= cfg_.num_arms) return init_arm(t, cfg_.player, cfg_.num_arms);
    std::vector<double> u(cfg_.num_arms);
    for (int i = 0; i < cfg_.num_arms; ++i) u[i] = stats_.ucb(i, t);
    int arm = pick_max(u, tie_rng());
    top_.assign(1, arm);
    return arm;
  }
  void observe(Time t, int arm, double reward) override { stats_.record(t, arm, reward); }
  std::span<const int> top_set() const override { return top_; }

 private:
  WindowStats stats_;
};

class RrSwUcbSharpPolicy final : public BasePolicy {
 public:
  explicit RrSwUcbSharpPolicy(const PolicyConfig& cfg)
      : BasePolicy(cfg),
        stats_(cfg.num_arms, window_alpha(cfg.nu), cfg.lambda, cfg.horizon) {}

  int select(Time t) override {
    Time n = cfg_.num_arms;
    if (t <= n) return init_arm(t, cfg_.player, cfg_.num_arms);
    // Recompute the round-robin set only at phase starts t in {N + eta*M + 1}.
    if ((t - n - 1) % cfg_.num_players == 0) {
      std::vector<double> u(cfg_.num_arms);
      for (int i = 0; i < cfg_.num_arms; ++i) u[i] = stats_.ucb(i, t);
      top_ = top_m_arms(u, cfg_.num_players, tie_rng());
    }
    std::size_t slot = static_cast<std::size_t>((t - n + cfg_.player - 1) % cfg_.num_players);
    return top_[slot];
  }
  void observe(Time t, int arm, double reward) override { stats_.record(t, arm, reward); }
  std::span<const int> top_set() const override { return top_; }

 private:
  WindowStats stats_;
};

class SwDlpPolicy final : public BasePolicy {
 public:
  explicit SwDlpPolicy(const PolicyConfig& cfg)
      : BasePolicy(cfg),
        stats_(cfg.num_arms, window_alpha(cfg.nu), cfg.lambda, cfg.horizon) {}

  int select(Time t) override {
    if (t <= cfg_.num_arms) return init_arm(t, cfg_.player, cfg_.num_arms);
    std::vector<double> u(cfg_.num_arms), l(cfg_.num_arms);
    for (int i = 0; i < cfg_.num_arms; ++i) {
      u[i] = stats_.ucb(i, t);
      l[i] = stats_.lcb(i, t);
    }
    top_ = top_m_arms(u, cfg_.player + 1, tie_rng());
    return DlpPolicy::select_min_lcb(top_, l, tie_rng());
  }
  void observe(Time t, int arm, double reward) override { stats_.record(t, arm, reward); }
  std::span<const int> top_set() const override { return top_; }

 private:
  WindowStats stats_;
};

class OraclePolicy final : public Policy {
 public:
  OraclePolicy(const PolicyConfig& cfg, const MeanTimeline* tl) : rank_(cfg.player), tl_(tl) {
    if (tl_ == nullptr) throw std::invalid_argument("oracle policy needs the mean timeline");
  }
  int select(Time t) override { return tl_->rank_arm(t, rank_); }
  void observe(Time, int, double) override {}

 private:
  int rank_;
  const MeanTimeline* tl_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, const MeanTimeline* timeline) {
  if (cfg.player < 0 || cfg.player >= cfg.num_players)
    throw std::invalid_argument("make_policy: player index out of range");
  if (cfg.num_players > cfg.num_arms)
    throw std::invalid_argument("make_policy: players must not exceed arms");
  switch (cfg.kind) {
    case PolicyKind::ucb: return std::make_unique<UcbPolicy>(cfg);
    case PolicyKind::dlp: return std::make_unique<DlpPolicy>(cfg);
    case PolicyKind::sw_ucb_sharp: return std::make_unique<SwUcbSharpPolicy>(cfg);
    case PolicyKind::rr_sw_ucb_sharp: return std::make_unique<RrSwUcbSharpPolicy>(cfg);
    case PolicyKind::sw_dlp: return std::make_unique<SwDlpPolicy>(cfg);
    case PolicyKind::oracle: return std::make_unique<OraclePolicy>(cfg, timeline);
  }
  throw std::logic_error("make_policy: unknown policy kind");
}

}  // namespace swb
