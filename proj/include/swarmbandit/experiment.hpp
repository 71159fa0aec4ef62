#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmbandit/env.hpp"
#include "swarmbandit/policies.hpp"

namespace swb {

struct ExperimentSpec {
  std::vector<PolicyKind> algorithms = {PolicyKind::rr_sw_ucb_sharp, PolicyKind::sw_dlp};
  std::vector<double> nu_grid = {0.15, 0.3, 0.45};
  int num_arms = 6;
  int num_players = 3;
  Time horizon = 100000;
  double lambda = 12.3;
  std::vector<double> mean_pool = {0.05, 0.22, 0.39, 0.56, 0.73, 0.90};
  RewardModel reward_model;
  int replications = 20;
  std::uint64_t master_seed = 1729;
  std::string output_dir = "out";
  Time decimate = 0;  // output stride; 0 = auto ceil(T/1000), 1 = full series
  bool retain_trace = false;
  bool dump_env = false;
  TieBreak tie_break = TieBreak::lowest_index;
};

// All violated constraints, one message each; empty means valid.
std::vector<std::string> validate(const ExperimentSpec& spec);

// Stable per-run sub-seed: a pure function of (master_seed, algorithm name,
// nu bit pattern, replication). Independent of grid order and grid size.
std::uint64_t derive_run_seed(std::uint64_t master_seed, PolicyKind kind, double nu,
                              int replication);

struct CliOptions {
  ExperimentSpec spec;
  int workers = 0;  // 0 = hardware concurrency
};

// --help or --version was requested: print text to stdout, exit 0.
struct HelpRequested {
  std::string text;
};

// Unknown flags, malformed values, or violated constraints (all violations
// joined into one message): print to stderr, exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CliOptions parse_args(int argc, const char* const* argv);

// Runs every (algorithm, nu, replication) combination and writes
// runs/<algorithm>_nu<nu>_rep<r>.csv, aggregate.csv and manifest.json under
// spec.output_dir. Outputs are byte-identical for any worker count.
// Returns 0 on success, 1 on I/O failure (partial files are removed).
int run_experiment(const ExperimentSpec& spec, int workers, std::ostream& out,
                   std::ostream& progress);

}  // namespace swb
