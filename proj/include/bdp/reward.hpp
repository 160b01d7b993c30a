#ifndef BDP_REWARD_HPP
#define BDP_REWARD_HPP

// Distributions of the accumulated reward W_i = integral of g(X(t)) up to
// the first passage time, via the rate modification lambda* = lambda/g,
// mu* = mu/g which turns the law of W_i into a first-passage law.

#include <cmath>
#include <string>
#include <vector>

#include "bdp/model.hpp"
#include "bdp/passage.hpp"

namespace bdp {

// The modified process: rates divided by the reward off the taboo set
// (g is never consulted on taboo states).  Requires g > 0 at every
// non-taboo state up to the cap or a probe horizon.
inline BdpModel make_reward_model(const BdpModel& base, StateIndex probe_horizon = 2000) {
  if (base.taboo.empty()) throw ModelError("reward model: taboo set required");
  const StateIndex horizon = base.state_cap ? *base.state_cap : probe_horizon;
  for (StateIndex n = 0; n <= horizon; ++n) {
    if (base.taboo.contains(n)) continue;
    if (base.reward_at(n) <= 0.0)
      throw ModelError("reward must be positive off the taboo set; g(" + std::to_string(n) +
                       ") <= 0");
  }
  BdpModel m = base;
  const BdpModel inner = base;
  const TabooSet taboo = base.taboo;
  m.birth = [inner, taboo](StateIndex n) {
    if (taboo.contains(n)) return 0.0;
    const double lam = inner.birth_rate(n);
    return lam == 0.0 ? 0.0 : lam / inner.reward_at(n);
  };
  m.death = [inner, taboo](StateIndex n) {
    if (taboo.contains(n)) return 0.0;
    const double mu = inner.death_rate(n);
    return mu == 0.0 ? 0.0 : mu / inner.reward_at(n);
  };
  if (taboo.upper) {
    m.state_cap = base.state_cap ? std::min(*base.state_cap, *taboo.upper) : *taboo.upper;
  }
  return m;
}

namespace detail {

inline DistCurve reward_curve(const BdpModel& model, StateIndex i,
                              const std::vector<double>& grid, const InversionPlan& plan,
                              bool density, int threads) {
  model.taboo.validate(i);
  const BdpModel modified = make_reward_model(model);
  DistCurve curve = passage_curve(modified, i, grid, plan, density, threads);
  const ExplosionReport rep = explosion_check(modified);
  if (rep.verdict == ExplosionVerdict::explosive)
    curve.warnings.push_back(
        "modified process is explosive: the reward distribution may be defective");
  return curve;
}

}  // namespace detail

// Pr(W_i < w) over a cost grid (units: reward x time).
inline DistCurve reward_cdf(const BdpModel& model, StateIndex i, const std::vector<double>& grid,
                            const InversionPlan& plan = {}, int threads = 1) {
  return detail::reward_curve(model, i, grid, plan, /*density=*/false, threads);
}

// Density of W_i: inversion of s * sum_j f*_ij(s) on the modified model.
inline DistCurve reward_density(const BdpModel& model, StateIndex i,
                                const std::vector<double>& grid, const InversionPlan& plan = {},
                                int threads = 1) {
  return detail::reward_curve(model, i, grid, plan, /*density=*/true, threads);
}

namespace detail {

// Modified Bessel function of the first kind, integer order, by its
// ascending series.  Kept independent of the transform pipeline so the
// closed-form Kendall density below can serve as an oracle against it.
inline double bessel_i_series(int order, double x) {
  const double half = x / 2.0;
  double term = 1.0;
  for (int k = 1; k <= order; ++k) term *= half / k;  // (x/2)^order / order!
  double sum = term;
  const double q = half * half;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace detail

// Closed-form density of the accumulated particle-time of a subcritical
// Kendall process (g(n) = n, absorption at 0):
//   h(w) = (i/w) e^{-(lambda+mu)w} (mu/lambda)^{i/2} I_i(2w sqrt(lambda mu)).
// Reference/oracle use only.
inline double kendall_reference_density(double lambda, double mu, StateIndex i, double w) {
  if (!(mu > lambda) || !(lambda > 0.0))
    throw ModelError("kendall_reference_density: requires mu > lambda > 0");
  if (i < 1) throw ModelError("kendall_reference_density: requires i >= 1");
  if (!(w > 0.0)) throw ModelError("kendall_reference_density: requires w > 0");
  const double x = 2.0 * w * std::sqrt(lambda * mu);
  return static_cast<double>(i) / w * std::exp(-(lambda + mu) * w) *
         std::pow(mu / lambda, static_cast<double>(i) / 2.0) *
         detail::bessel_i_series(static_cast<int>(i), x);
}

}  // namespace bdp

#endif  // BDP_REWARD_HPP
