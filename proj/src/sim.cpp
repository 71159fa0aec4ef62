#include "swarmbandit/sim.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace swb {

std::vector<std::pair<int, int>> resolve_collisions(std::span<const int> selections,
                                                    int num_arms) {
  std::vector<int> hits(num_arms, 0);
  std::vector<int> who(num_arms, -1);
  for (int k = 0; k < static_cast<int>(selections.size()); ++k) {
    int arm = selections[k];
    if (arm < 0 || arm >= num_arms)
      throw std::invalid_argument("resolve_collisions: selection out of range");
    ++hits[arm];
    who[arm] = k;
  }
  std::vector<std::pair<int, int>> sole;
  for (int arm = 0; arm < num_arms; ++arm)
    if (hits[arm] == 1) sole.emplace_back(arm, who[arm]);
  return sole;
}

std::pair<std::vector<int>, double> oracle_top_m(const MeanTimeline& tl, Time t, int m) {
  if (m < 1 || m > tl.num_arms()) throw std::invalid_argument("oracle_top_m: m out of range");
  int seg = tl.segment_index(t);
  const std::vector<int>& ranking = tl.ranking(seg);
  std::vector<int> arms(ranking.begin(), ranking.begin() + m);
  std::sort(arms.begin(), arms.end());
  const std::vector<double>& means = tl.segment_means(seg);
  double sum = 0.0;
  for (int arm : arms) sum += means[arm];
  return {std::move(arms), sum};
}

RunResult run_episode(const MeanTimeline& tl, const EnvConfig& cfg, const RunParams& params,
                      std::uint64_t run_seed) {
  if (tl.num_arms() != cfg.num_arms)
    throw std::invalid_argument("run_episode: timeline arm count differs from config");
  if (tl.horizon() != cfg.horizon)
    throw std::invalid_argument("run_episode: timeline horizon differs from config");
  int num_arms = cfg.num_arms;
  int num_players = cfg.num_players;
  Time horizon = cfg.horizon;

  std::vector<std::unique_ptr<Policy>> policies;
  policies.reserve(static_cast<std::size_t>(num_players));
  for (int k = 0; k < num_players; ++k) {
    PolicyConfig pc;
    pc.kind = params.kind;
    pc.player = k;
    pc.num_arms = num_arms;
    pc.num_players = num_players;
    pc.horizon = horizon;
    pc.nu = cfg.nu;
    pc.lambda = params.lambda;
    pc.tie_break = params.tie_break;
    pc.tie_seed = tie_stream_seed(run_seed, k);
    policies.push_back(make_policy(pc, &tl));
  }
  Rng reward_rng(reward_stream_seed(run_seed));

  // Per-segment truth, so the loop never re-sorts.
  int num_segments = tl.num_segments();
  std::vector<std::vector<int>> seg_top(static_cast<std::size_t>(num_segments));
  std::vector<double> seg_reward(static_cast<std::size_t>(num_segments), 0.0);
  for (int s = 0; s < num_segments; ++s) {
    auto [arms, sum] = oracle_top_m(tl, tl.segment_start(s), num_players);
    seg_top[static_cast<std::size_t>(s)] = std::move(arms);
    seg_reward[static_cast<std::size_t>(s)] = sum;
  }

  RunResult result;
  RegretLedger& led = result.ledger;
  led.horizon = horizon;
  led.num_players = num_players;
  std::size_t ht = static_cast<std::size_t>(horizon);
  led.cum_regret.assign(ht, 0.0);
  led.cum_collisions.assign(ht, 0);
  led.misid_max.assign(ht, 0);
  led.cum_disagreements.assign(ht, 0);
  led.player_cum_reward.assign(static_cast<std::size_t>(num_players),
                               std::vector<double>(ht, 0.0));
  led.misid_final.assign(static_cast<std::size_t>(num_players), 0);
  if (params.retain_trace) result.trace.reserve(ht);

  std::vector<int> selections(static_cast<std::size_t>(num_players), -1);
  std::vector<double> observed(static_cast<std::size_t>(num_players), 0.0);
  std::vector<double> realization(static_cast<std::size_t>(num_arms), 0.0);
  std::vector<char> drawn(static_cast<std::size_t>(num_arms), 0);
  std::vector<std::int64_t> misid(static_cast<std::size_t>(num_players), 0);

  double cum_regret = 0.0;
  std::int64_t cum_collisions = 0;
  std::int64_t cum_disagreements = 0;
  int seg = 0;

  for (Time t = 1; t <= horizon; ++t) {
    while (t > tl.segment_end(seg)) ++seg;
    const std::vector<double>& means = tl.segment_means(seg);
    const std::vector<int>& true_top = seg_top[static_cast<std::size_t>(seg)];

    for (int k = 0; k < num_players; ++k) selections[static_cast<std::size_t>(k)] = policies[static_cast<std::size_t>(k)]->select(t);
    std::vector<std::pair<int, int>> sole = resolve_collisions(selections, num_arms);

    double group = 0.0;
    for (const auto& [arm, player] : sole) group += means[arm];
    double oracle_reward = seg_reward[static_cast<std::size_t>(seg)];
    double inst_regret = oracle_reward - group;
    cum_regret += inst_regret;
    cum_collisions += num_players - static_cast<std::int64_t>(sole.size());

    // One realization per (arm, t), drawn for distinct selected arms in
    // ascending arm order and shared by every selector of that arm.
    std::fill(drawn.begin(), drawn.end(), 0);
    for (int k = 0; k < num_players; ++k) drawn[static_cast<std::size_t>(selections[static_cast<std::size_t>(k)])] = 1;
    for (int arm = 0; arm < num_arms; ++arm)
      if (drawn[static_cast<std::size_t>(arm)])
        realization[static_cast<std::size_t>(arm)] =
            sample_reward(tl, arm, t, cfg.reward_model, reward_rng);
    for (int k = 0; k < num_players; ++k) {
      int arm = selections[static_cast<std::size_t>(k)];
      observed[static_cast<std::size_t>(k)] = realization[static_cast<std::size_t>(arm)];
      policies[static_cast<std::size_t>(k)]->observe(t, arm, observed[static_cast<std::size_t>(k)]);
    }

    // Identification bookkeeping: a player exposing a full size-M set is
    // checked against the true top set; otherwise its selection is checked
    // against the true rank-k arm.
    bool all_full = true;
    bool differ = false;
    std::span<const int> first_set = policies[0]->top_set();
    for (int k = 0; k < num_players; ++k) {
      std::span<const int> top = policies[static_cast<std::size_t>(k)]->top_set();
      if (static_cast<int>(top.size()) == num_players) {
        if (!std::equal(top.begin(), top.end(), true_top.begin(), true_top.end()))
          ++misid[static_cast<std::size_t>(k)];
        if (k > 0 && !std::equal(top.begin(), top.end(), first_set.begin(), first_set.end()))
          differ = true;
      } else {
        all_full = false;
        if (selections[static_cast<std::size_t>(k)] != tl.rank_arm(t, k))
          ++misid[static_cast<std::size_t>(k)];
      }
    }
    if (all_full && differ) ++cum_disagreements;

    std::size_t idx = static_cast<std::size_t>(t - 1);
    led.cum_regret[idx] = cum_regret;
    led.cum_collisions[idx] = cum_collisions;
    led.cum_disagreements[idx] = cum_disagreements;
    std::int64_t mmax = 0;
    for (std::int64_t m : misid) mmax = std::max(mmax, m);
    led.misid_max[idx] = mmax;
    for (int k = 0; k < num_players; ++k) {
      double prev = (t == 1) ? 0.0 : led.player_cum_reward[static_cast<std::size_t>(k)][idx - 1];
      led.player_cum_reward[static_cast<std::size_t>(k)][idx] = prev;
    }
    for (const auto& [arm, player] : sole)
      led.player_cum_reward[static_cast<std::size_t>(player)][idx] += means[arm];

    if (params.retain_trace) {
      StepOutcome out;
      out.t = t;
      out.selections = selections;
      out.sole = sole;
      out.group_reward = group;
      out.oracle_reward = oracle_reward;
      out.inst_regret = inst_regret;
      out.observed = observed;
      out.top_sets.resize(static_cast<std::size_t>(num_players));
      for (int k = 0; k < num_players; ++k) {
        std::span<const int> top = policies[static_cast<std::size_t>(k)]->top_set();
        out.top_sets[static_cast<std::size_t>(k)].assign(top.begin(), top.end());
      }
      result.trace.push_back(std::move(out));
    }
  }
  led.misid_final.assign(misid.begin(), misid.end());
  return result;
}

RunResult simulate(const EnvConfig& cfg, const RunParams& params, std::uint64_t run_seed) {
  std::vector<std::string> problems = validate(cfg);
  if (!problems.empty()) {
    std::ostringstream oss;
    oss << "simulate: invalid config:";
    for (const std::string& p : problems) oss << ' ' << p << ';';
    throw std::invalid_argument(oss.str());
  }
  Rng env_rng(env_stream_seed(run_seed));
  MeanTimeline tl = build_timeline(cfg, env_rng);
  return run_episode(tl, cfg, params, run_seed);
}

}  // namespace swb
