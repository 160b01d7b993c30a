#ifndef BDP_PASSAGE_HPP
#define BDP_PASSAGE_HPP

// First passage times into barrier taboo sets via the absorbing
// modification, and the explosion (passage-to-infinity) criterion.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bdp/laplace.hpp"
#include "bdp/model.hpp"
#include "bdp/parallel.hpp"

namespace bdp {

// The absorbing modification: rates zeroed on the taboo set.  With an
// upper barrier the chain becomes effectively finite, so the state cap
// tightens to it.
inline BdpModel absorb(const BdpModel& base) {
  if (base.taboo.empty()) throw ModelError("absorb: model has no taboo set");
  BdpModel m = base;
  const TabooSet taboo = base.taboo;
  const BdpModel inner = base;
  m.birth = [inner, taboo](StateIndex n) {
    return taboo.contains(n) ? 0.0 : inner.birth_rate(n);
  };
  m.death = [inner, taboo](StateIndex n) {
    return taboo.contains(n) ? 0.0 : inner.death_rate(n);
  };
  if (taboo.upper) {
    m.state_cap = base.state_cap ? std::min(*base.state_cap, *taboo.upper) : *taboo.upper;
  }
  return m;
}

inline std::vector<StateIndex> taboo_targets(const TabooSet& taboo) {
  std::vector<StateIndex> t;
  if (taboo.lower) t.push_back(*taboo.lower);
  if (taboo.upper) t.push_back(*taboo.upper);
  return t;
}

namespace detail {

inline DistCurve passage_curve(const BdpModel& model, StateIndex i,
                               const std::vector<double>& grid, const InversionPlan& plan,
                               bool density, int threads) {
  model.taboo.validate(i);
  const BdpModel absorbed = absorb(model);
  const std::vector<StateIndex> targets = taboo_targets(model.taboo);
  const LaplaceFn fn = transform_sum(absorbed, i, targets, density);

  DistCurve curve;
  curve.grid = grid;
  curve.err.assign(grid.size(), 0.0);
  auto& col = density ? curve.density : curve.cdf;
  col.assign(grid.size(), 0.0);

  bool unsettled = false;
  parallel_for(grid.size(), threads, [&](std::size_t idx) {
    const InversionResult r = invert(fn, grid[idx], plan);
    col[idx] = r.value;
    curve.err[idx] = r.err;
    if (!r.settled) unsettled = true;
  });
  if (unsettled)
    curve.warnings.push_back("inversion series failed to settle at one or more grid points");

  if (density) {
    // The discretization bound assumes the inverted function is <= 1;
    // rescale by a sup estimate when the density exceeds that (heuristic).
    double sup = 1.0;
    for (double v : curve.density) sup = std::max(sup, v);
    if (sup > 1.0) {
      for (auto& e : curve.err) e *= sup;
      curve.warnings.push_back("density exceeds 1; discretization error scaled by sup " +
                               std::to_string(sup) + " (heuristic)");
    }
  }
  return curve;
}

}  // namespace detail

// Pr(tau_i < t) over the grid: sum of absorbed-model transition
// probabilities into each barrier state.
inline DistCurve fpt_cdf(const BdpModel& model, StateIndex i, const std::vector<double>& grid,
                         const InversionPlan& plan = {}, int threads = 1) {
  return detail::passage_curve(model, i, grid, plan, /*density=*/false, threads);
}

// First passage density: inversion of s * sum_j f_ij(s) on the absorbed
// model (the P_ij(0) boundary term vanishes because i is not taboo).
inline DistCurve fpt_density(const BdpModel& model, StateIndex i,
                             const std::vector<double>& grid, const InversionPlan& plan = {},
                             int threads = 1) {
  return detail::passage_curve(model, i, grid, plan, /*density=*/true, threads);
}

enum class ExplosionVerdict { explosive, non_explosive, inconclusive };

struct ExplosionReport {
  double expected_passage_to_infinity = std::numeric_limits<double>::infinity();
  ExplosionVerdict verdict = ExplosionVerdict::inconclusive;
  std::vector<double> partial_sum_trace;
};

inline const char* to_string(ExplosionVerdict v) {
  switch (v) {
    case ExplosionVerdict::explosive: return "explosive";
    case ExplosionVerdict::non_explosive: return "non_explosive";
    case ExplosionVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

// Expected passage time to infinity from 0, accumulated term by term:
// with e_n the expected passage time from n to n+1,
//   e_n = 1/lambda_n + (mu_n/lambda_n) e_{n-1},
// the total is sum_n e_n, which is the double sum over pi_j / (mu_n pi_n)
// with the products folded into the recurrence (stable, no overflow from
// raw pi products).  Convergent sum => explosive.
//
// Verdict: the dyadic block sums S(2T)-S(T) of a series with terms
// ~ n^{-p} shrink by the factor b = 2^{1-p} per doubling, so the last
// block ratio separates convergence (b well below 1) from divergence
// (b near or above 1); near the p = 1 boundary the check abstains.
inline ExplosionReport explosion_check(const BdpModel& model, long terms = 10000) {
  ExplosionReport rep;
  if (model.state_cap) {
    rep.verdict = ExplosionVerdict::non_explosive;
    return rep;
  }
  const long total = 2 * terms;
  const long trace_stride = std::max(1L, total / 64);
  // Leading absorbing/idle states (e.g. a lower taboo barrier) carry no
  // mass toward infinity; start the recurrence at the first live state.
  long start = 0;
  while (start < total && model.birth_rate(start) == 0.0) ++start;
  if (start == total) {
    rep.verdict = ExplosionVerdict::non_explosive;
    return rep;
  }
  double sum = 0.0;
  double sum_half = 0.0, sum_full = 0.0;  // partial sums at T/2 and T
  double e_prev = 0.0;
  for (long n = start; n < start + total; ++n) {
    const double lam = model.birth_rate(n);
    if (lam == 0.0) {
      // infinity unreachable past this state
      rep.verdict = ExplosionVerdict::non_explosive;
      rep.partial_sum_trace.push_back(sum);
      return rep;
    }
    const double mu = model.death_rate(n);
    const double e_n = (1.0 + mu * e_prev) / lam;
    sum += e_n;
    e_prev = e_n;
    if (n - start == terms / 2 - 1) sum_half = sum;
    if (n - start == terms - 1) sum_full = sum;
    if ((n - start) % trace_stride == 0) rep.partial_sum_trace.push_back(sum);
    if (sum > 1e300 || e_n > 1e300) {
      // series diverges outright
      rep.verdict = ExplosionVerdict::non_explosive;
      return rep;
    }
  }
  rep.partial_sum_trace.push_back(sum);
  const double block_prev = sum_full - sum_half;  // terms in (T/2, T]
  const double block_last = sum - sum_full;       // terms in (T, 2T]
  if (block_last <= 1e-14 * sum || block_prev <= 0.0) {
    // tail already negligible: the series has converged
    rep.verdict = ExplosionVerdict::explosive;
    rep.expected_passage_to_infinity = sum;
    return rep;
  }
  const double b = block_last / block_prev;
  if (b <= 0.9) {
    rep.verdict = ExplosionVerdict::explosive;
    // geometric extrapolation of the remaining dyadic blocks
    rep.expected_passage_to_infinity = sum + block_last * b / (1.0 - b);
  } else if (b >= 0.98) {
    rep.verdict = ExplosionVerdict::non_explosive;
  } else {
    rep.verdict = ExplosionVerdict::inconclusive;
    rep.expected_passage_to_infinity = sum;
  }
  return rep;
}

}  // namespace bdp

#endif  // BDP_PASSAGE_HPP
