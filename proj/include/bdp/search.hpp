#ifndef BDP_SEARCH_HPP
#define BDP_SEARCH_HPP

// Monotone parameter searches for probabilistic control problems:
// smallest control epsilon with Pr(W_i < C) >= 1-alpha, and lowest
// strike k with Pr(W_i(k) > R) > 1-alpha.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bdp/model.hpp"
#include "bdp/reward.hpp"

namespace bdp {

struct SearchResult {
  double value = 0.0;           // control epsilon, or the strike k
  double constraint_prob = 0.0; // Pr at the returned value
  double bracket_value = 0.0;   // witness: next-smaller candidate ...
  double bracket_prob = 0.0;    // ... and the probability it achieves
  bool feasible = false;
  std::vector<std::pair<double, double>> probes;  // (parameter, probability)
};

class InfeasibleSearch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Single-point CDF probe Pr(W_i < w).
inline double reward_cdf_at(const BdpModel& model, StateIndex i, double w,
                            const InversionPlan& plan, double* err_out = nullptr) {
  const DistCurve c = reward_cdf(model, i, {w}, plan);
  if (err_out) *err_out = c.err[0];
  return c.cdf[0];
}

}  // namespace detail

// Smallest epsilon in [eps_lo, eps_hi] with Pr(W_i < C) >= 1 - alpha.
// Coarse scan (coarse_step), then bisection to `step`.  The probe
// probability is assumed continuous and nondecreasing in epsilon; a
// probe sequence decreasing by more than 3x the numerical error budget
// violates that assumption and aborts.
inline SearchResult min_control(const std::function<BdpModel(double)>& model_family,
                                StateIndex i, double cost_bound, double alpha, double eps_lo,
                                double eps_hi, double step = 0.01,
                                const InversionPlan& plan = {}, double coarse_step = 0.5) {
  if (!(cost_bound > 0.0)) throw ModelError("min_control: cost bound must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ModelError("min_control: alpha must be in (0,1)");
  if (!(eps_lo <= eps_hi)) throw ModelError("min_control: empty epsilon range");
  const double target = 1.0 - alpha;

  SearchResult res;
  double max_err = 0.0;
  auto probe = [&](double eps) {
    double err = 0.0;
    const double p = detail::reward_cdf_at(model_family(eps), i, cost_bound, plan, &err);
    max_err = std::max(max_err, err);
    if (!res.probes.empty() && p < res.probes.back().second - 3.0 * std::max(max_err, 1e-9) &&
        eps > res.probes.back().first)
      throw NumericalError(
          "min_control: probe probabilities are not monotone in epsilon (assumption violated)");
    res.probes.emplace_back(eps, p);
    return p;
  };

  double below = eps_lo, below_p = 0.0;
  double above = eps_hi, above_p = 0.0;
  bool found = false;
  for (double eps = eps_lo;; eps += coarse_step) {
    if (eps > eps_hi) eps = eps_hi;
    const double p = probe(eps);
    if (p >= target) {
      above = eps;
      above_p = p;
      found = true;
      break;
    }
    below = eps;
    below_p = p;
    if (eps >= eps_hi) break;
  }
  if (!found) {
    res.value = eps_hi;
    res.constraint_prob = below_p;
    res.feasible = false;
    return res;
  }
  if (above == eps_lo) {
    // satisfied at the lower end of the range
    res.value = eps_lo;
    res.constraint_prob = above_p;
    res.bracket_value = eps_lo;
    res.bracket_prob = above_p;
    res.feasible = true;
    return res;
  }
  while (above - below > step) {
    const double mid = 0.5 * (above + below);
    const double p = probe(mid);
    if (p >= target) {
      above = mid;
      above_p = p;
    } else {
      below = mid;
      below_p = p;
    }
  }
  res.value = above;
  res.constraint_prob = above_p;
  res.bracket_value = below;
  res.bracket_prob = below_p;
  res.feasible = true;
  return res;
}

// Smallest integer strike k in (i, k_max] with Pr(W_i(k) > R) > 1 - alpha,
// by ascending scan.  strike_model(k) must return the reward model with
// upper taboo barrier k.
inline SearchResult min_strike(const std::function<BdpModel(StateIndex)>& strike_model,
                               StateIndex i, double desired_return, double alpha,
                               StateIndex k_max, const InversionPlan& plan = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ModelError("min_strike: alpha must be in (0,1)");
  if (k_max <= i) throw ModelError("min_strike: k range must lie above the initial state");
  SearchResult res;
  double prev_p = 1.0;
  StateIndex prev_k = i;
  for (StateIndex k = i + 1; k <= k_max; ++k) {
    double p;
    if (desired_return <= 0.0) {
      p = 0.0;  // W_i(k) > 0 almost surely
    } else {
      p = detail::reward_cdf_at(strike_model(k), i, desired_return, plan);
    }
    res.probes.emplace_back(static_cast<double>(k), p);
    if (p < alpha) {
      res.value = static_cast<double>(k);
      res.constraint_prob = p;
      res.bracket_value = static_cast<double>(prev_k);
      res.bracket_prob = prev_p;
      res.feasible = true;
      return res;
    }
    prev_p = p;
    prev_k = k;
  }
  res.value = static_cast<double>(k_max);
  res.constraint_prob = prev_p;
  res.feasible = false;
  return res;
}

}  // namespace bdp

#endif  // BDP_SEARCH_HPP
