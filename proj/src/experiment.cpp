#include "swarmbandit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "swarmbandit/metrics.hpp"
#include "swarmbandit/sim.hpp"
#include "swarmbandit/version.hpp"

namespace swb {

namespace {

const char* tie_break_name(TieBreak tb) {
  return tb == TieBreak::lowest_index ? "lowest-index" : "seeded-random";
}

std::optional<TieBreak> parse_tie_break(const std::string& s) {
  if (s == "lowest-index") return TieBreak::lowest_index;
  if (s == "seeded-random") return TieBreak::seeded_random;
  return std::nullopt;
}

std::string reward_model_name(const RewardModel& model) {
  if (model.kind == RewardModel::Kind::bernoulli) return "bernoulli";
  return "gaussian:" + format_double(model.sigma);
}

std::optional<RewardModel> parse_reward_model(const std::string& s) {
  if (s == "bernoulli") return RewardModel{RewardModel::Kind::bernoulli, 0.0};
  const std::string prefix = "gaussian:";
  if (s.rfind(prefix, 0) == 0) {
    std::string rest = s.substr(prefix.size());
    try {
      std::size_t used = 0;
      double sigma = std::stod(rest, &used);
      if (used != rest.size() || !(sigma >= 0.0) || !std::isfinite(sigma)) return std::nullopt;
      return RewardModel{RewardModel::Kind::truncated_gaussian, sigma};
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::string> validate(const ExperimentSpec& spec) {
  std::vector<std::string> out;
  if (spec.algorithms.empty()) out.push_back("at least one algorithm is required");
  for (std::size_t i = 0; i < spec.algorithms.size(); ++i)
    for (std::size_t j = i + 1; j < spec.algorithms.size(); ++j)
      if (spec.algorithms[i] == spec.algorithms[j]) {
        out.push_back(std::string("duplicate algorithm: ") +
                      policy_kind_name(spec.algorithms[i]));
        j = spec.algorithms.size();
      }
  if (spec.nu_grid.empty()) out.push_back("at least one nu value is required");
  for (double nu : spec.nu_grid)
    if (!(nu >= 0.0 && nu < 1.0)) {
      out.push_back("nu must lie in [0, 1)");
      break;
    }
  for (std::size_t i = 0; i < spec.nu_grid.size(); ++i)
    for (std::size_t j = i + 1; j < spec.nu_grid.size(); ++j)
      if (spec.nu_grid[i] == spec.nu_grid[j]) {
        out.push_back("duplicate nu value: " + format_double(spec.nu_grid[i]));
        j = spec.nu_grid.size();
      }
  if (spec.num_arms < 1) out.push_back("N must be >= 1");
  if (spec.num_players < 1) out.push_back("M must be >= 1");
  if (spec.num_players > spec.num_arms) out.push_back("M must be <= N");
  if (spec.horizon < spec.num_arms) out.push_back("T must be >= N");
  if (spec.horizon < 2) out.push_back("T must be >= 2");
  if (!(spec.lambda > 0.0)) out.push_back("lambda must be > 0");
  if (static_cast<int>(spec.mean_pool.size()) < spec.num_arms)
    out.push_back("mean pool must hold at least N values");
  for (double v : spec.mean_pool)
    if (!(v >= 0.0 && v <= 1.0)) {
      out.push_back("mean pool values must lie in [0, 1]");
      break;
    }
  for (std::size_t i = 0; i < spec.mean_pool.size(); ++i)
    for (std::size_t j = i + 1; j < spec.mean_pool.size(); ++j)
      if (spec.mean_pool[i] == spec.mean_pool[j]) {
        out.push_back("mean pool values must be pairwise distinct");
        i = spec.mean_pool.size();
        break;
      }
  if (spec.replications < 1) out.push_back("replications must be >= 1");
  if (spec.decimate < 0) out.push_back("decimate must be >= 0");
  if (spec.reward_model.kind == RewardModel::Kind::truncated_gaussian &&
      !(spec.reward_model.sigma >= 0.0))
    out.push_back("gaussian sigma must be >= 0");
  if (spec.output_dir.empty()) out.push_back("output directory must not be empty");
  return out;
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, PolicyKind kind, double nu,
                              int replication) {
  std::uint64_t s = derive_seed(master_seed, fnv1a64(policy_kind_name(kind)));
  s = derive_seed(s, double_bits(nu));
  return derive_seed(s, static_cast<std::uint64_t>(replication));
}

CliOptions parse_args(int argc, const char* const* argv) {
  CliOptions opts;
  ExperimentSpec& spec = opts.spec;

  std::vector<std::string> algorithm_names;
  for (PolicyKind k : spec.algorithms) algorithm_names.push_back(policy_kind_name(k));
  std::string reward_model_str = reward_model_name(spec.reward_model);
  std::string tie_break_str = tie_break_name(spec.tie_break);

  CLI::App app{"Multi-player bandit benchmark harness for abruptly-changing environments"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "Read options from an INI file (flags override file values)");
  app.add_option("--algorithm", algorithm_names,
                 "Policy to run; repeatable "
                 "(ucb|dlp|sw-ucb-sharp|rr-sw-ucb-sharp|sw-dlp|oracle)")
      ->capture_default_str();
  app.add_option("--nu", spec.nu_grid, "Breakpoint-density exponent in [0,1); repeatable")
      ->capture_default_str();
  app.add_option("--arms", spec.num_arms, "Number of arms N")->capture_default_str();
  app.add_option("--players", spec.num_players, "Number of players M")->capture_default_str();
  app.add_option("--horizon", spec.horizon, "Horizon T")->capture_default_str();
  app.add_option("--lambda", spec.lambda, "Sliding-window scale")->capture_default_str();
  app.add_option("--mean-pool", spec.mean_pool, "Comma-separated reward-mean pool")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--reward-model", reward_model_str, "bernoulli or gaussian:<sigma>")
      ->capture_default_str();
  app.add_option("--replications", spec.replications, "Replications per (algorithm, nu)")
      ->capture_default_str();
  app.add_option("--seed", spec.master_seed, "Master seed")
      ->envname("SWARMBANDIT_SEED")
      ->capture_default_str();
  app.add_option("--out", spec.output_dir, "Output directory")->capture_default_str();
  app.add_option("--decimate", spec.decimate,
                 "CSV output stride; 0 = auto (about 1000 rows), 1 = every step")
      ->capture_default_str();
  app.add_flag("--retain-trace", spec.retain_trace,
               "Keep per-step traces and cross-check the misidentification counters");
  app.add_flag("--dump-env", spec.dump_env, "Write each run's mean timeline next to its CSV");
  app.add_option("--tie-break", tie_break_str, "lowest-index or seeded-random")
      ->capture_default_str();
  app.add_option("--workers", opts.workers, "Worker threads; 0 = hardware concurrency")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested{std::string(kVersion) + "\n"};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  std::vector<std::string> problems;
  spec.algorithms.clear();
  for (const std::string& name : algorithm_names) {
    std::optional<PolicyKind> kind = parse_policy_kind(name);
    if (kind)
      spec.algorithms.push_back(*kind);
    else
      problems.push_back("unknown algorithm: " + name);
  }
  if (std::optional<RewardModel> model = parse_reward_model(reward_model_str))
    spec.reward_model = *model;
  else
    problems.push_back("reward model must be bernoulli or gaussian:<sigma>: " + reward_model_str);
  if (std::optional<TieBreak> tb = parse_tie_break(tie_break_str))
    spec.tie_break = *tb;
  else
    problems.push_back("tie break must be lowest-index or seeded-random: " + tie_break_str);
  if (opts.workers < 0) problems.push_back("workers must be >= 0");

  for (std::string& p : validate(spec)) problems.push_back(std::move(p));

  if (!problems.empty()) {
    std::ostringstream oss;
    oss << "invalid arguments:";
    for (const std::string& p : problems) oss << "\n  - " << p;
    throw UsageError(oss.str());
  }
  return opts;
}

namespace {

struct RunCoord {
  int algo_index = 0;
  int nu_index = 0;
  int replication = 0;
  PolicyKind kind = PolicyKind::rr_sw_ucb_sharp;
  double nu = 0.0;
  std::uint64_t seed = 0;
  std::string csv_name;  // relative to output_dir
  std::string env_name;  // relative to output_dir, dump_env only
};

class FileTracker {
 public:
  void add(const std::filesystem::path& p) {
    std::lock_guard<std::mutex> lock(mu_);
    files_.push_back(p);
  }
  void remove_all() {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& p : files_) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
    files_.clear();
  }

 private:
  std::mutex mu_;
  std::vector<std::filesystem::path> files_;
};

}  // namespace

int run_experiment(const ExperimentSpec& spec, int workers, std::ostream& out,
                   std::ostream& progress) {
  std::vector<std::string> problems = validate(spec);
  if (!problems.empty()) {
    for (const std::string& p : problems) progress << "error: " << p << '\n';
    return 1;
  }

  std::vector<RunCoord> coords;
  for (int ai = 0; ai < static_cast<int>(spec.algorithms.size()); ++ai)
    for (int ni = 0; ni < static_cast<int>(spec.nu_grid.size()); ++ni)
      for (int rep = 0; rep < spec.replications; ++rep) {
        RunCoord c;
        c.algo_index = ai;
        c.nu_index = ni;
        c.replication = rep;
        c.kind = spec.algorithms[static_cast<std::size_t>(ai)];
        c.nu = spec.nu_grid[static_cast<std::size_t>(ni)];
        c.seed = derive_run_seed(spec.master_seed, c.kind, c.nu, rep);
        std::string stem = std::string(policy_kind_name(c.kind)) + "_nu" + format_double(c.nu) +
                           "_rep" + std::to_string(rep);
        c.csv_name = "runs/" + stem + ".csv";
        c.env_name = "runs/" + stem + ".env.txt";
        coords.push_back(std::move(c));
      }
  std::size_t total = coords.size();

  Time stride = spec.decimate > 0 ? spec.decimate : (spec.horizon + 999) / 1000;
  std::vector<Time> grid = decimation_grid(spec.horizon, stride);

  std::filesystem::path out_dir(spec.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "runs", ec);
  if (ec) {
    progress << "error: cannot create output directory " << (out_dir / "runs").string() << ": "
             << ec.message() << '\n';
    return 1;
  }

  std::vector<RatioSeries> ratios(total);
  std::vector<double> final_regret(total, 0.0);
  FileTracker tracker;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> failed{false};
  std::mutex err_mu;
  std::string first_error;
  std::mutex progress_mu;

  auto fail_with = [&](const std::string& msg) {
    std::lock_guard<std::mutex> lock(err_mu);
    if (first_error.empty()) first_error = msg;
    failed.store(true);
  };

  auto worker = [&]() {
    while (!failed.load()) {
      std::size_t i = next.fetch_add(1);
      if (i >= total) break;
      const RunCoord& c = coords[i];
      try {
        EnvConfig env_cfg;
        env_cfg.num_arms = spec.num_arms;
        env_cfg.num_players = spec.num_players;
        env_cfg.horizon = spec.horizon;
        env_cfg.nu = c.nu;
        env_cfg.mean_pool = spec.mean_pool;
        env_cfg.reward_model = spec.reward_model;

        Rng env_rng(env_stream_seed(c.seed));
        MeanTimeline tl = build_timeline(env_cfg, env_rng);

        if (spec.dump_env) {
          std::filesystem::path path = out_dir / c.env_name;
          std::ofstream ofs(path, std::ios::binary);
          if (!ofs) throw std::runtime_error("cannot open " + path.string());
          tracker.add(path);
          write_env_dump(ofs, tl, spec.num_players, c.nu, c.seed);
          ofs.close();
          if (!ofs) throw std::runtime_error("failed writing " + path.string());
        }

        RunParams params;
        params.kind = c.kind;
        params.lambda = spec.lambda;
        params.tie_break = spec.tie_break;
        params.retain_trace = spec.retain_trace;
        RunResult result = run_episode(tl, env_cfg, params, c.seed);

        if (spec.retain_trace) {
          MisidentCounters check =
              misident_counts(result.trace, tl, spec.num_players);
          for (int k = 0; k < spec.num_players; ++k) {
            std::int64_t replayed = check.top_set_mismatch[static_cast<std::size_t>(k)] +
                                    check.rank_mismatch[static_cast<std::size_t>(k)];
            if (replayed != result.ledger.misid_final[static_cast<std::size_t>(k)])
              throw std::runtime_error("trace cross-check failed: misidentification counters "
                                       "disagree for player " +
                                       std::to_string(k));
          }
          if (check.disagreements != result.ledger.cum_disagreements.back())
            throw std::runtime_error(
                "trace cross-check failed: disagreement counters disagree");
        }

        ratios[i] = regret_ratio_at(result.ledger, c.nu, grid);
        final_regret[i] = result.ledger.cum_regret.back();

        RunCsvMeta meta;
        meta.algorithm = policy_kind_name(c.kind);
        meta.nu = c.nu;
        meta.lambda = spec.lambda;
        meta.seed = c.seed;
        meta.replication = c.replication;
        std::filesystem::path path = out_dir / c.csv_name;
        std::ofstream ofs(path, std::ios::binary);
        if (!ofs) throw std::runtime_error("cannot open " + path.string());
        tracker.add(path);
        write_run_csv(ofs, meta, result.ledger, grid);
        ofs.close();
        if (!ofs) throw std::runtime_error("failed writing " + path.string());

        std::size_t n = done.fetch_add(1) + 1;
        std::lock_guard<std::mutex> lock(progress_mu);
        progress << "run " << n << '/' << total << ' ' << meta.algorithm
                 << " nu=" << format_double(c.nu) << " rep=" << c.replication << " done\n";
      } catch (const std::exception& e) {
        fail_with(e.what());
      }
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  std::size_t pool = workers > 0 ? static_cast<std::size_t>(workers) : (hw > 0 ? hw : 1);
  pool = std::min(pool, total);
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (std::size_t i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (std::thread& th : threads) th.join();
  }

  if (failed.load()) {
    tracker.remove_all();
    progress << "error: " << first_error << '\n';
    return 1;
  }

  // Ordered reduction: block order and replication order are fixed by the
  // spec, never by completion order.
  std::vector<AggregateCsvBlock> blocks;
  std::vector<double> block_regret_mean;
  for (int ai = 0; ai < static_cast<int>(spec.algorithms.size()); ++ai)
    for (int ni = 0; ni < static_cast<int>(spec.nu_grid.size()); ++ni) {
      std::vector<RatioSeries> series;
      double regret_sum = 0.0;
      for (std::size_t i = 0; i < total; ++i)
        if (coords[i].algo_index == ai && coords[i].nu_index == ni) {
          series.push_back(ratios[i]);
          regret_sum += final_regret[i];
        }
      AggregateCsvBlock block;
      block.algorithm = policy_kind_name(spec.algorithms[static_cast<std::size_t>(ai)]);
      block.nu = spec.nu_grid[static_cast<std::size_t>(ni)];
      block.series = aggregate(series);
      blocks.push_back(std::move(block));
      block_regret_mean.push_back(regret_sum / static_cast<double>(spec.replications));
    }

  {
    std::filesystem::path path = out_dir / "aggregate.csv";
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) {
      tracker.remove_all();
      progress << "error: cannot open " << path.string() << '\n';
      return 1;
    }
    tracker.add(path);
    write_aggregate_csv(ofs, blocks);
    ofs.close();
    if (!ofs) {
      tracker.remove_all();
      progress << "error: failed writing " << path.string() << '\n';
      return 1;
    }
  }

  {
    nlohmann::ordered_json manifest;
    manifest["artifact"] = "swarmbandit";
    manifest["version"] = kVersion;
    nlohmann::ordered_json js;
    nlohmann::ordered_json algos = nlohmann::ordered_json::array();
    for (PolicyKind k : spec.algorithms) algos.push_back(policy_kind_name(k));
    js["algorithms"] = algos;
    js["nu_grid"] = spec.nu_grid;
    js["num_arms"] = spec.num_arms;
    js["num_players"] = spec.num_players;
    js["horizon"] = spec.horizon;
    js["lambda"] = spec.lambda;
    js["mean_pool"] = spec.mean_pool;
    js["reward_model"] = reward_model_name(spec.reward_model);
    js["replications"] = spec.replications;
    js["master_seed"] = spec.master_seed;
    // output_dir is deliberately omitted: the manifest already lives there,
    // and recording it would make otherwise-identical outputs differ by
    // directory.
    js["decimate"] = spec.decimate;
    js["decimate_stride_effective"] = stride;
    js["retain_trace"] = spec.retain_trace;
    js["dump_env"] = spec.dump_env;
    js["tie_break"] = tie_break_name(spec.tie_break);
    manifest["spec"] = std::move(js);
    manifest["seed_scheme"] =
        "run_seed = d(d(d(master_seed, fnv1a64(algorithm)), bits64(nu)), replication) with "
        "d(b, s) = splitmix64(b xor splitmix64(s)); stream seeds: d(run_seed, fnv1a64(tag)) "
        "for tags env/reward, and d(d(run_seed, fnv1a64(\"tie\")), player) for tie-breaking";
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const RunCoord& c : coords) {
      nlohmann::ordered_json r;
      r["algorithm"] = policy_kind_name(c.kind);
      r["nu"] = c.nu;
      r["replication"] = c.replication;
      r["seed"] = c.seed;
      r["file"] = c.csv_name;
      if (spec.dump_env) r["env_file"] = c.env_name;
      runs.push_back(std::move(r));
    }
    manifest["runs"] = std::move(runs);

    std::filesystem::path path = out_dir / "manifest.json";
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) {
      tracker.remove_all();
      progress << "error: cannot open " << path.string() << '\n';
      return 1;
    }
    tracker.add(path);
    ofs << manifest.dump(2) << '\n';
    ofs.close();
    if (!ofs) {
      tracker.remove_all();
      progress << "error: failed writing " << path.string() << '\n';
      return 1;
    }
  }

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const AggregateCsvBlock& block = blocks[b];
    out << "summary algorithm=" << block.algorithm << " nu=" << format_double(block.nu)
        << " final_regret_mean=" << format_double(block_regret_mean[b])
        << " final_ratio_mean=" << format_double(block.series.mean.back()) << '\n';
  }
  return 0;
}

}  // namespace swb
