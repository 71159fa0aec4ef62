#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmbandit/env.hpp"
#include "swarmbandit/window.hpp"

namespace swb {

enum class PolicyKind { ucb, dlp, sw_ucb_sharp, rr_sw_ucb_sharp, sw_dlp, oracle };

const char* policy_kind_name(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(const std::string& name);

enum class TieBreak { lowest_index, seeded_random };

struct PolicyConfig {
  PolicyKind kind = PolicyKind::rr_sw_ucb_sharp;
  int player = 0;  // 0-based, < num_players
  int num_arms = 6;
  int num_players = 3;
  Time horizon = 100000;
  double nu = 0.3;       // sets alpha for the windowed kinds
  double lambda = 12.3;  // window scale
  TieBreak tie_break = TieBreak::lowest_index;
  std::uint64_t tie_seed = 0;  // seeded_random only
};

inline double window_alpha(double nu) { return (1.0 - nu) / 2.0; }

// Initialization selection for t in [1, N]: arm (t + player - 1) mod N,
// 0-based; every player covers every arm exactly once, and no two players
// collide at any init step.
int init_arm(Time t, int player, int num_arms);

// Selection helpers shared by the policies. Exact-value ties go to the lowest
// arm index, or uniformly at random among the tied arms when rng != nullptr.
int pick_max(std::span<const double> values, Rng* rng);
int pick_min(std::span<const double> values, Rng* rng);
// Arms holding the m largest values, returned ascending by arm index.
std::vector<int> top_m_arms(std::span<const double> values, int m, Rng* rng);

class Policy {
 public:
  virtual ~Policy() = default;
  // Arm for step t (0-based arm). Must be called with t = 1, 2, ... in order.
  virtual int select(Time t) = 0;
  // Realized reward of the arm this player selected at t, collision or not.
  virtual void observe(Time t, int arm, double reward) = 0;
  // Current estimated top set (ascending): the round-robin set for
  // rr-sw-ucb-sharp, A_k for the dlp kinds, the incumbent argmax for the
  // plain ucb kinds. Empty before the first post-init selection and for oracle.
  virtual std::span<const int> top_set() const { return {}; }
};

// timeline is required for kind == oracle and ignored otherwise; the learners
// see nothing but their own observations.
std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, const MeanTimeline* timeline);

}  // namespace swb
