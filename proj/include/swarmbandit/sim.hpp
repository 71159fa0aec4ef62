#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "swarmbandit/env.hpp"
#include "swarmbandit/policies.hpp"

namespace swb {

struct StepOutcome {
  Time t = 0;
  std::vector<int> selections;                // [M]
  std::vector<std::pair<int, int>> sole;      // (arm, player), ascending by arm
  double group_reward = 0.0;                  // sum of mu over sole-selected arms
  double oracle_reward = 0.0;                 // sum of the true top-M means
  double inst_regret = 0.0;
  std::vector<double> observed;               // [M] realized rewards
  std::vector<std::vector<int>> top_sets;     // [M] per-player estimated sets (may be empty)
};

struct RegretLedger {
  Time horizon = 0;
  int num_players = 0;
  std::vector<double> cum_regret;              // [T], nondecreasing
  std::vector<std::int64_t> cum_collisions;    // [T] players involved in collisions, cumulative
  std::vector<std::int64_t> misid_max;         // [T] max over players of the misidentification count
  std::vector<std::int64_t> cum_disagreements; // [T] steps where players' top-M sets differ
  std::vector<std::vector<double>> player_cum_reward;  // [M][T] accrued sole-selection means
  std::vector<std::int64_t> misid_final;       // [M]
};

// (arm, player) pairs for arms selected by exactly one player, ascending by arm.
std::vector<std::pair<int, int>> resolve_collisions(std::span<const int> selections,
                                                    int num_arms);

// True top-M arm set at t (ascending) and the sum of their means, summed in
// ascending-arm order so it is bit-comparable with a group reward over the
// same set.
std::pair<std::vector<int>, double> oracle_top_m(const MeanTimeline& tl, Time t, int m);

struct RunParams {
  PolicyKind kind = PolicyKind::rr_sw_ucb_sharp;
  double lambda = 12.3;
  TieBreak tie_break = TieBreak::lowest_index;
  bool retain_trace = false;
};

struct RunResult {
  RegretLedger ledger;
  std::vector<StepOutcome> trace;  // empty unless retain_trace
};

// One episode over a prebuilt timeline. run_seed feeds the reward stream and
// the per-player tie-break streams; the timeline is fixed by its own build.
RunResult run_episode(const MeanTimeline& tl, const EnvConfig& cfg, const RunParams& params,
                      std::uint64_t run_seed);

// build_timeline + run_episode, deriving the env stream from the same run_seed.
RunResult simulate(const EnvConfig& cfg, const RunParams& params, std::uint64_t run_seed);

// Stream tags for the per-run sub-streams (documented so replays can be
// reconstructed externally).
inline std::uint64_t env_stream_seed(std::uint64_t run_seed) {
  return derive_seed(run_seed, fnv1a64("env"));
}
inline std::uint64_t reward_stream_seed(std::uint64_t run_seed) {
  return derive_seed(run_seed, fnv1a64("reward"));
}
inline std::uint64_t tie_stream_seed(std::uint64_t run_seed, int player) {
  return derive_seed(derive_seed(run_seed, fnv1a64("tie")), static_cast<std::uint64_t>(player));
}

}  // namespace swb
