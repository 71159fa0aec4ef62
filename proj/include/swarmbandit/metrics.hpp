#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "swarmbandit/sim.hpp"

namespace swb {

struct RatioSeries {
  double nu = 0.0;
  std::vector<Time> times;
  std::vector<double> values;  // R(t) / (t^((1+nu)/2) * ln t)
};

// Full series for t = 2..T (the normalizer vanishes at t=1).
RatioSeries regret_ratio(const RegretLedger& ledger, double nu);
// Same ratio evaluated only at the given times (each must be in [2, T]).
RatioSeries regret_ratio_at(const RegretLedger& ledger, double nu, std::span<const Time> times);

struct AggregateSeries {
  std::vector<Time> times;
  std::vector<double> mean;
  std::vector<double> stderr_;  // sample stddev / sqrt(n); 0 for n = 1
};

// Pointwise across replications; all series must share one time grid.
AggregateSeries aggregate(std::span<const RatioSeries> series);

struct MisidentCounters {
  std::vector<std::int64_t> top_set_mismatch;  // [M] steps with top set != true top-M set
  std::vector<std::int64_t> rank_mismatch;     // [M] steps with selection != true rank-k arm
  std::int64_t disagreements = 0;              // steps where players' top-M sets differ
};

// Recomputed from a retained trace (cross-checks the ledger's online counters).
MisidentCounters misident_counts(std::span<const StepOutcome> trace, const MeanTimeline& tl,
                                 int num_players);

// Output grid: multiples of stride within [2, T], plus T itself.
std::vector<Time> decimation_grid(Time horizon, Time stride);

// Shortest %.9g rendering, shared by every CSV emitter.
std::string format_double(double v);

struct RunCsvMeta {
  std::string algorithm;
  double nu = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  int replication = 0;
};

// Header: algorithm,nu,lambda,seed,replication,t,regret,ratio,collisions,misid_Nk_max,disagreements
void write_run_csv(std::ostream& os, const RunCsvMeta& meta, const RegretLedger& ledger,
                   std::span<const Time> times);

struct AggregateCsvBlock {
  std::string algorithm;
  double nu = 0.0;
  AggregateSeries series;
};

// Header: algorithm,nu,t,ratio_mean,ratio_stderr
void write_aggregate_csv(std::ostream& os, std::span<const AggregateCsvBlock> blocks);

}  // namespace swb
