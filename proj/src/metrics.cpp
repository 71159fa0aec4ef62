#include "swarmbandit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace swb {

namespace {

double ratio_value(const RegretLedger& ledger, double nu, Time t) {
  if (t < 2 || t > ledger.horizon)
    throw std::invalid_argument("regret ratio: t must lie in [2, horizon]");
  double td = static_cast<double>(t);
  double denom = std::pow(td, (1.0 + nu) / 2.0) * std::log(td);
  return ledger.cum_regret[static_cast<std::size_t>(t - 1)] / denom;
}

}  // namespace

RatioSeries regret_ratio(const RegretLedger& ledger, double nu) {
  RatioSeries out;
  out.nu = nu;
  if (ledger.horizon < 2) return out;
  out.times.reserve(static_cast<std::size_t>(ledger.horizon - 1));
  out.values.reserve(static_cast<std::size_t>(ledger.horizon - 1));
  for (Time t = 2; t <= ledger.horizon; ++t) {
    out.times.push_back(t);
    out.values.push_back(ratio_value(ledger, nu, t));
  }
  return out;
}

RatioSeries regret_ratio_at(const RegretLedger& ledger, double nu, std::span<const Time> times) {
  RatioSeries out;
  out.nu = nu;
  out.times.assign(times.begin(), times.end());
  out.values.reserve(times.size());
  for (Time t : times) out.values.push_back(ratio_value(ledger, nu, t));
  return out;
}

AggregateSeries aggregate(std::span<const RatioSeries> series) {
  if (series.empty()) throw std::invalid_argument("aggregate: need at least one series");
  const std::vector<Time>& grid = series[0].times;
  for (const RatioSeries& s : series)
    if (s.times != grid) throw std::invalid_argument("aggregate: series use different time grids");
  AggregateSeries out;
  out.times = grid;
  std::size_t n = series.size();
  out.mean.resize(grid.size());
  out.stderr_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double sum = 0.0;
    for (const RatioSeries& s : series) sum += s.values[i];
    double mean = sum / static_cast<double>(n);
    double var = 0.0;
    if (n > 1) {
      for (const RatioSeries& s : series) {
        double d = s.values[i] - mean;
        var += d * d;
      }
      var /= static_cast<double>(n - 1);
    }
    out.mean[i] = mean;
    out.stderr_[i] = (n > 1) ? std::sqrt(var / static_cast<double>(n)) : 0.0;
  }
  return out;
}

MisidentCounters misident_counts(std::span<const StepOutcome> trace, const MeanTimeline& tl,
                                 int num_players) {
  MisidentCounters out;
  out.top_set_mismatch.assign(static_cast<std::size_t>(num_players), 0);
  out.rank_mismatch.assign(static_cast<std::size_t>(num_players), 0);
  for (const StepOutcome& step : trace) {
    auto [true_top, sum] = oracle_top_m(tl, step.t, num_players);
    (void)sum;
    bool all_full = true;
    bool differ = false;
    for (int k = 0; k < num_players; ++k) {
      const std::vector<int>& top = step.top_sets[static_cast<std::size_t>(k)];
      if (static_cast<int>(top.size()) == num_players) {
        if (top != true_top) ++out.top_set_mismatch[static_cast<std::size_t>(k)];
        if (k > 0 && top != step.top_sets[0]) differ = true;
      } else {
        all_full = false;
        if (step.selections[static_cast<std::size_t>(k)] != tl.rank_arm(step.t, k))
          ++out.rank_mismatch[static_cast<std::size_t>(k)];
      }
    }
    if (all_full && differ) ++out.disagreements;
  }
  return out;
}

std::vector<Time> decimation_grid(Time horizon, Time stride) {
  if (horizon < 2) throw std::invalid_argument("decimation_grid: horizon must be >= 2");
  if (stride < 1) throw std::invalid_argument("decimation_grid: stride must be >= 1");
  std::vector<Time> grid;
  for (Time t = stride; t <= horizon; t += stride)
    if (t >= 2) grid.push_back(t);
  if (grid.empty() || grid.back() != horizon) grid.push_back(horizon);
  return grid;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_run_csv(std::ostream& os, const RunCsvMeta& meta, const RegretLedger& ledger,
                   std::span<const Time> times) {
  os << "algorithm,nu,lambda,seed,replication,t,regret,ratio,collisions,misid_Nk_max,"
        "disagreements\n";
  for (Time t : times) {
    std::size_t idx = static_cast<std::size_t>(t - 1);
    os << meta.algorithm << ',' << format_double(meta.nu) << ',' << format_double(meta.lambda)
       << ',' << meta.seed << ',' << meta.replication << ',' << t << ','
       << format_double(ledger.cum_regret[idx]) << ',' << format_double(ratio_value(ledger, meta.nu, t))
       << ',' << ledger.cum_collisions[idx] << ',' << ledger.misid_max[idx] << ','
       << ledger.cum_disagreements[idx] << '\n';
  }
}

void write_aggregate_csv(std::ostream& os, std::span<const AggregateCsvBlock> blocks) {
  os << "algorithm,nu,t,ratio_mean,ratio_stderr\n";
  for (const AggregateCsvBlock& block : blocks) {
    const AggregateSeries& s = block.series;
    for (std::size_t i = 0; i < s.times.size(); ++i)
      os << block.algorithm << ',' << format_double(block.nu) << ',' << s.times[i] << ','
         << format_double(s.mean[i]) << ',' << format_double(s.stderr_[i]) << '\n';
  }
}

}  // namespace swb
