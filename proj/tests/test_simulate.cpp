#include <catch2/catch_amalgamated.hpp>

#include "bdp/grid.hpp"
#include "bdp/reward.hpp"
#include "bdp/simulate.hpp"
#include "oracles.hpp"

using namespace bdp;

TEST_CASE("pure death from 1 makes exactly one jump") {
  BdpModel m;
  m.birth = [](StateIndex) { return 0.0; };
  m.death = [](StateIndex n) { return static_cast<double>(n); };
  m.taboo.lower = 0;
  m.state_cap = 3;
  for (std::uint64_t seed : {1ULL, 7ULL, 12345ULL}) {
    const auto p = simulate(m, 1, seed);
    REQUIRE(p.jump_times.size() == 1);
    REQUIRE(p.states.size() == 2);
    CHECK(p.states[0] == 1);
    CHECK(p.states[1] == 0);
    CHECK(p.absorbed_at.has_value());
    CHECK(*p.absorbed_at == 0);
    CHECK_FALSE(p.censored);
  }
}

TEST_CASE("same seed gives identical paths") {
  auto m = make_kendall(0.3, 0.5);
  const auto a = simulate(m, 2, 42);
  const auto b = simulate(m, 2, 42);
  CHECK(a.jump_times == b.jump_times);
  CHECK(a.states == b.states);
  CHECK(a.reward_integral == b.reward_integral);
  const auto c = simulate(m, 2, 43);
  CHECK(a.jump_times != c.jump_times);
}

TEST_CASE("path legality invariants") {
  auto m = make_mm_queue(1.0, 1.2, 2);
  for (std::uint64_t p = 0; p < 200; ++p) {
    const auto path = simulate(m, 3, 2024, {}, p);
    REQUIRE(path.states.size() == path.jump_times.size() + 1);
    for (std::size_t k = 1; k < path.jump_times.size(); ++k)
      CHECK(path.jump_times[k] > path.jump_times[k - 1]);
    for (std::size_t k = 1; k < path.states.size(); ++k)
      CHECK(std::abs(path.states[k] - path.states[k - 1]) == 1);
    // reward integral recomputed from the path
    double w = 0.0, prev_t = 0.0;
    for (std::size_t k = 0; k + 1 < path.states.size(); ++k) {
      w += m.reward_at(path.states[k]) * (path.jump_times[k] - prev_t);
      prev_t = path.jump_times[k];
    }
    CHECK(path.reward_integral == Catch::Approx(w).margin(1e-9));
  }
}

TEST_CASE("trapped states are diagnosed") {
  BdpModel m;
  m.birth = [](StateIndex) { return 0.0; };
  m.death = [](StateIndex) { return 0.0; };
  m.taboo.lower = 0;
  CHECK_THROWS_WITH(simulate(m, 5, 1), Catch::Matchers::ContainsSubstring("trapped state"));
  // with a horizon the path is censored instead
  Horizon h;
  h.time = 3.0;
  const auto p = simulate(m, 5, 1, h);
  CHECK(p.censored);
  CHECK(p.reward_integral == Catch::Approx(3.0));  // default g == 1 accrues until the horizon
}

TEST_CASE("time horizon censors inside a holding interval") {
  auto m = make_kendall(0.1, 0.2);  // slow rates, long holds
  Horizon h;
  h.time = 1e-6;
  const auto p = simulate(m, 4, 9);
  const auto q = simulate(m, 4, 9, h);
  CHECK(q.censored);
  CHECK(q.reward_integral <= m.reward_at(4) * h.time + 1e-12);
}

TEST_CASE("cost horizon censors by accumulated reward") {
  auto m = make_kendall(0.2, 0.4);
  Horizon h;
  h.cost = 0.5;
  for (std::uint64_t p = 0; p < 50; ++p) {
    const auto s = simulate(m, 3, 77, h, p);
    CHECK(s.reward_integral <= h.cost + 1e-9);
  }
}

TEST_CASE("empirical cdf basics") {
  RewardSamples samples;
  samples.rewards = {1.0, 2.0, 3.0};
  const auto e = empirical_cdf(samples, {2.5});
  CHECK(e.cdf[0] == Catch::Approx(2.0 / 3.0));
  CHECK(e.tail_mass == 0.0);
  samples.censored = 1;  // 4 samples total now
  const auto e2 = empirical_cdf(samples, {2.5});
  CHECK(e2.cdf[0] == Catch::Approx(0.5));
  CHECK(e2.tail_mass == Catch::Approx(0.25));
  CHECK_THROWS_AS(empirical_cdf(RewardSamples{}, {1.0}), ModelError);
}

TEST_CASE("ks distance") {
  DistCurve a, b;
  a.grid = b.grid = {1.0, 2.0};
  a.cdf = {0.2, 0.8};
  b.cdf = {0.2, 0.8};
  CHECK(ks_distance(a, b) == 0.0);
  b.cdf = {0.1, 0.95};
  CHECK(ks_distance(a, b) == Catch::Approx(0.15));
  DistCurve c;
  c.grid = {1.0};
  c.cdf = {0.5};
  CHECK_THROWS_AS(ks_distance(a, c), ModelError);
}

TEST_CASE("ensemble generation is thread-count independent") {
  auto m = make_kendall(0.2, 0.6);
  const auto one = sample_rewards(m, 2, 500, 314, {}, 1);
  const auto four = sample_rewards(m, 2, 500, 314, {}, 4);
  CHECK(one.rewards == four.rewards);
  CHECK(one.censored == four.censored);
}

TEST_CASE("mean sampled reward matches quadrature of the closed-form density") {
  auto m = make_kendall(0.1, 0.5);
  const std::size_t n = 100000;
  const auto samples = sample_rewards(m, 1, n, 20240817, {}, 8);
  REQUIRE(samples.censored == 0);
  double mean = 0.0;
  for (double w : samples.rewards) mean += w;
  mean /= static_cast<double>(samples.rewards.size());
  double var = 0.0;
  for (double w : samples.rewards) var += (w - mean) * (w - mean);
  var /= static_cast<double>(samples.rewards.size() - 1);
  const double se = std::sqrt(var / static_cast<double>(samples.rewards.size()));
  const double expect = oracles::adaptive_simpson(
      [](double w) { return w * kendall_reference_density(0.1, 0.5, 1, w); }, 1e-9, 150.0,
      1e-10);
  CHECK(std::abs(mean - expect) < 3.0 * se);
}
