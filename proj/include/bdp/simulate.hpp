#ifndef BDP_SIMULATE_HPP
#define BDP_SIMULATE_HPP

// Exact (Gillespie) path sampler for BDP models, with reward-integral
// accounting.  Serves as the empirical oracle for the analytic pipeline.
// Per-path RNG streams are derived from (seed, path_index), so ensembles
// are reproducible regardless of thread count or evaluation order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "bdp/laplace.hpp"
#include "bdp/model.hpp"
#include "bdp/parallel.hpp"

namespace bdp {

struct PathSample {
  std::vector<double> jump_times;   // ascending; |states| == |jump_times| + 1
  std::vector<StateIndex> states;   // visited states, starting at X(0)
  double reward_integral = 0.0;     // sum of g(state) * holding time
  std::optional<StateIndex> absorbed_at;
  bool censored = false;            // horizon hit before absorption
};

struct Horizon {
  double time = std::numeric_limits<double>::infinity();
  double cost = std::numeric_limits<double>::infinity();
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path_index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ path_index));
}

}  // namespace detail

// One exact path from state i until it enters the taboo set or exceeds
// the time/cost horizon.  Holding time in state n is Exponential of
// lambda_n + mu_n; the jump is a birth with probability lambda/(lambda+mu).
inline PathSample simulate(const BdpModel& model, StateIndex i, std::uint64_t seed,
                           Horizon horizon = {}, std::uint64_t path_index = 0,
                           bool record_path = true) {
  model.taboo.validate(i);
  auto rng = detail::path_rng(seed, path_index);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  PathSample path;
  StateIndex n = i;
  double t = 0.0;
  if (record_path) path.states.push_back(n);
  const bool has_horizon = std::isfinite(horizon.time) || std::isfinite(horizon.cost);

  for (;;) {
    if (model.taboo.contains(n)) {
      path.absorbed_at = n;
      return path;
    }
    const double lam = model.birth_rate(n);
    const double mu = model.death_rate(n);
    const double total = lam + mu;
    const double g = model.reward_at(n);
    if (total == 0.0) {
      if (!has_horizon)
        throw ModelError("trapped state " + std::to_string(n) +
                         ": zero total rate outside the taboo set and no horizon");
      const double dt_time = horizon.time - t;
      const double dt_cost = g > 0.0 ? (horizon.cost - path.reward_integral) / g
                                     : std::numeric_limits<double>::infinity();
      const double dt = std::min(dt_time, dt_cost);
      path.reward_integral += g * dt;
      path.censored = true;
      return path;
    }
    double dt = -std::log1p(-unif(rng)) / total;
    // censor if the horizon lands inside this holding interval
    const double cost_room = horizon.cost - path.reward_integral;
    if (t + dt > horizon.time || (g > 0.0 && g * dt > cost_room)) {
      double dt_cap = horizon.time - t;
      if (g > 0.0) dt_cap = std::min(dt_cap, cost_room / g);
      path.reward_integral += g * dt_cap;
      path.censored = true;
      return path;
    }
    t += dt;
    path.reward_integral += g * dt;
    n += (unif(rng) * total < lam) ? 1 : -1;
    if (record_path) {
      path.jump_times.push_back(t);
      path.states.push_back(n);
    }
  }
}

struct RewardSamples {
  std::vector<double> rewards;  // uncensored reward integrals
  std::size_t censored = 0;
};

// Ensemble of reward integrals; paths themselves are discarded.
inline RewardSamples sample_rewards(const BdpModel& model, StateIndex i, std::size_t paths,
                                    std::uint64_t seed, Horizon horizon = {},
                                    int threads = 1) {
  std::vector<double> w(paths, 0.0);
  std::vector<std::uint8_t> cens(paths, 0);
  parallel_for(paths, threads, [&](std::size_t p) {
    const PathSample s =
        simulate(model, i, seed, horizon, static_cast<std::uint64_t>(p), /*record_path=*/false);
    w[p] = s.reward_integral;
    cens[p] = s.censored ? 1 : 0;
  });
  RewardSamples out;
  out.rewards.reserve(paths);
  for (std::size_t p = 0; p < paths; ++p) {
    if (cens[p])
      ++out.censored;
    else
      out.rewards.push_back(w[p]);
  }
  return out;
}

// Empirical CDF over a grid.  Censored samples sit beyond their horizon,
// so they contribute to the denominator but never to the counts; their
// mass is reported separately via tail_mass.
inline DistCurve empirical_cdf(const RewardSamples& samples, const std::vector<double>& grid) {
  const std::size_t total = samples.rewards.size() + samples.censored;
  if (total == 0) throw ModelError("empirical_cdf: no samples");
  std::vector<double> sorted = samples.rewards;
  std::sort(sorted.begin(), sorted.end());
  DistCurve curve;
  curve.grid = grid;
  curve.cdf.reserve(grid.size());
  curve.err.assign(grid.size(), 0.0);
  for (double x : grid) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    curve.cdf.push_back(static_cast<double>(it - sorted.begin()) / static_cast<double>(total));
  }
  curve.tail_mass = static_cast<double>(samples.censored) / static_cast<double>(total);
  return curve;
}

// Kolmogorov-Smirnov distance of two CDF curves on a common grid.
inline double ks_distance(const DistCurve& a, const DistCurve& b) {
  if (a.grid.size() != b.grid.size() || a.cdf.size() != b.cdf.size())
    throw ModelError("ks_distance: curves must share a grid");
  double ks = 0.0;
  for (std::size_t k = 0; k < a.cdf.size(); ++k)
    ks = std::max(ks, std::abs(a.cdf[k] - b.cdf[k]));
  return ks;
}

}  // namespace bdp

#endif  // BDP_SIMULATE_HPP
