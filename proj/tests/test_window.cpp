#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "swarmbandit/rng.hpp"
#include "swarmbandit/window.hpp"

using namespace swb;

namespace {

// From-scratch reference: keep the whole history, recount the window each time.
struct BruteWindow {
  double alpha;
  double lambda;
  std::vector<std::pair<int, double>> history;  // history[t-1] = (arm, reward)

  Time now() const { return static_cast<Time>(history.size()); }
  Time width() const { return window_width(now(), alpha, lambda); }

  std::int64_t count(int arm) const {
    std::int64_t n = 0;
    for (Time t = now() - width() + 1; t <= now(); ++t)
      if (history[static_cast<std::size_t>(t - 1)].first == arm) ++n;
    return n;
  }
  double sum(int arm) const {
    double s = 0.0;
    for (Time t = now() - width() + 1; t <= now(); ++t)
      if (history[static_cast<std::size_t>(t - 1)].first == arm)
        s += history[static_cast<std::size_t>(t - 1)].second;
    return s;
  }
};

}  // namespace

TEST_CASE("window width matches frozen values") {
  CHECK(window_width(100, 0.425, 12.3) == 88);
  CHECK(window_width(50, 0.5, 1.0) == 8);
  CHECK(window_width(1, 0.425, 12.3) == 1);
  CHECK(window_width(10, 1.0, 1.0) == 10);
}

TEST_CASE("window width is nondecreasing and never exceeds t") {
  for (double alpha : {0.275, 0.35, 0.425, 0.5}) {
    Time prev = 0;
    for (Time t = 1; t <= 3000; ++t) {
      Time w = window_width(t, alpha, 12.3);
      REQUIRE(w >= 1);
      REQUIRE(w <= t);
      REQUIRE(w >= prev);
      prev = w;
    }
  }
}

TEST_CASE("window width rejects bad arguments") {
  CHECK_THROWS_AS(window_width(0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(window_width(10, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(window_width(10, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(window_width(10, 1.5, 1.0), std::invalid_argument);
}

TEST_CASE("eight-record trace lands in the frozen state") {
  WindowStats w(3, 0.5, 1.0, 100);
  const std::vector<std::tuple<Time, int, double>> trace = {
      {1, 0, 1.0}, {2, 1, 0.0}, {3, 0, 1.0},   {4, 2, 0.5},
      {5, 0, 0.25}, {6, 1, 1.0}, {7, 0, 0.125}, {8, 2, 0.0}};
  for (const auto& [t, arm, r] : trace) w.record(t, arm, r);
  CHECK(window_width(8, 0.5, 1.0) == 3);
  CHECK(w.current_time() == 8);
  REQUIRE(w.oldest_time().has_value());
  CHECK(*w.oldest_time() == 6);
  CHECK(w.count(0) == 1);
  CHECK(w.count(1) == 1);
  CHECK(w.count(2) == 1);
  CHECK(w.total_count() == 3);
  CHECK(w.windowed_sum(0) == 0.125);
  CHECK(w.windowed_sum(1) == 1.0);
  CHECK(w.windowed_sum(2) == 0.0);
}

TEST_CASE("incremental stats equal a from-scratch recount on random traces") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    for (double alpha : {0.275, 0.425, 0.5}) {
      double lambda = (seed == 3) ? 1.0 : 12.3;
      const int num_arms = 4;
      const Time horizon = 700;
      WindowStats w(num_arms, alpha, lambda, horizon);
      BruteWindow brute{alpha, lambda, {}};
      Rng rng(seed);
      for (Time t = 1; t <= horizon; ++t) {
        int arm = static_cast<int>(rng.bounded(num_arms));
        double reward = rng.uniform01();
        w.record(t, arm, reward);
        brute.history.emplace_back(arm, reward);
        std::int64_t total = 0;
        for (int i = 0; i < num_arms; ++i) {
          REQUIRE(w.count(i) == brute.count(i));
          // Bit-identical, not approximately equal: both sides sum the same
          // values in the same chronological order.
          REQUIRE(w.windowed_sum(i) == brute.sum(i));
          total += w.count(i);
        }
        REQUIRE(total == window_width(t, alpha, lambda));
        REQUIRE(*w.oldest_time() == t - window_width(t, alpha, lambda) + 1);
      }
    }
  }
}

TEST_CASE("records must arrive consecutively from t=1") {
  WindowStats w(2, 0.5, 1.0, 50);
  CHECK_THROWS_AS(w.record(2, 0, 1.0), std::invalid_argument);
  w.record(1, 0, 1.0);
  CHECK_THROWS_AS(w.record(3, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(w.record(1, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(w.record(2, 5, 1.0), std::invalid_argument);
  w.record(2, 1, 0.5);
  CHECK(w.current_time() == 2);
}

TEST_CASE("means are nullopt without data and exact with it") {
  WindowStats w(2, 0.5, 1.0, 50);
  CHECK_FALSE(w.windowed_mean(0).has_value());
  CHECK_FALSE(w.oldest_time().has_value());
  w.record(1, 0, 0.75);
  REQUIRE(w.windowed_mean(0).has_value());
  CHECK(*w.windowed_mean(0) == 0.75);
  CHECK_FALSE(w.windowed_mean(1).has_value());
}

TEST_CASE("confidence bounds follow the windowed formula") {
  const double alpha = 0.35;
  WindowStats w(2, alpha, 12.3, 1000);
  // Unplayed arms dominate everything.
  w.record(1, 0, 0.5);
  CHECK(w.ucb(1, 2) == std::numeric_limits<double>::infinity());
  CHECK(w.lcb(1, 2) == -std::numeric_limits<double>::infinity());
  CHECK(w.confidence_radius(1, 2) == std::numeric_limits<double>::infinity());

  double expected = std::sqrt((1.0 + alpha) * std::log(2.0) / 1.0);
  CHECK(w.confidence_radius(0, 2) == expected);
  CHECK(w.ucb(0, 2) == 0.5 + expected);
  CHECK(w.lcb(0, 2) == 0.5 - expected);

  w.record(2, 0, 0.25);
  double r2 = std::sqrt((1.0 + alpha) * std::log(3.0) / 2.0);
  double mean = w.windowed_sum(0) / 2.0;
  CHECK(w.ucb(0, 3) == mean + r2);
  CHECK(w.lcb(0, 3) == mean - r2);
  CHECK(w.lcb(0, 3) <= *w.windowed_mean(0));
  CHECK(*w.windowed_mean(0) <= w.ucb(0, 3));
}

TEST_CASE("lambda=1 window shrinks to ceil(sqrt(t)) of recent history") {
  WindowStats w(1, 0.5, 1.0, 100);
  for (Time t = 1; t <= 50; ++t) w.record(t, 0, 1.0);
  CHECK(w.count(0) == 8);  // ceil(sqrt(50))
  CHECK(w.windowed_sum(0) == 8.0);
  CHECK(*w.oldest_time() == 43);
}
