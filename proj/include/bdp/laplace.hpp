#ifndef BDP_LAPLACE_HPP
#define BDP_LAPLACE_HPP

// Laplace transforms f_ij(s) of BDP transition probabilities assembled
// from continued fraction convergent ratios, and Fourier-series numerical
// inversion with Euler summation and an explicit error budget.

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "bdp/contfrac.hpp"
#include "bdp/model.hpp"

namespace bdp {

struct TransformEval {
  Complex value{0.0, 0.0};
  double trunc_err = 0.0;  // bound on the continued fraction truncation error
  bool rigorous = true;
};

// Complex-argument evaluator for f_ij(s) (or s*f_ij(s) when
// multiply_by_s is set), with per-call truncation accounting.
struct LaplaceFn {
  std::function<TransformEval(Complex s, double tol)> eval;
  bool multiply_by_s = false;
};

namespace detail {

// f_ij(s) via the two-sided convergent formula: with lo = min(i,j) and
// hi = max(i,j),
//   f_ij(s) = prefactor * (B_lo/B_hi) / (B_{hi+1}/B_hi + T)
// where T = a_{hi+2}/(b_{hi+2} + a_{hi+3}/(...)) and the prefactor is the
// product of mu_k (downward) or lambda_k (upward).  Everything is
// combined in log space; raw B_k values are never formed.
inline TransformEval eval_fij(const BdpModel& model, StateIndex i, StateIndex j, Complex s,
                              double tol, int max_depth) {
  TransformEval out;
  const StateIndex lo = std::min(i, j);
  const StateIndex hi = std::max(i, j);

  double log_pref = 0.0;
  if (j < i) {
    for (StateIndex k = j + 1; k <= i; ++k) {
      const double mu = model.death_rate(k);
      if (mu == 0.0) return out;  // j unreachable downward
      log_pref += std::log(mu);
    }
  } else if (i < j) {
    for (StateIndex k = i; k <= j - 1; ++k) {
      const double lam = model.birth_rate(k);
      if (lam == 0.0) return out;  // j unreachable upward
      log_pref += std::log(lam);
    }
  }

  const ContFrac cf = make_bdp_contfrac(model, s);
  const int hi_i = static_cast<int>(hi);
  const std::vector<Complex> ds = lentz_d_values(cf, hi_i + 1);

  // B_hi / B_lo
  double log_z = 0.0;
  Complex z(1.0, 0.0);
  if (hi > lo) {
    auto [ls, zz] =
        denominator_ratio_scaled(cf, static_cast<int>(lo), static_cast<int>(hi - lo),
                                 1.0 / ds[static_cast<std::size_t>(lo)]);
    log_z = ls;
    z = zz;
  }

  // Tail fraction beyond depth hi+1.
  ContFrac tail;
  tail.a = [&cf, hi_i](int t) { return cf.a(hi_i + 1 + t); };
  tail.b = [&cf, hi_i](int t) { return cf.b(hi_i + 1 + t); };
  int tail_depth = max_depth;
  if (model.state_cap) {
    // a_k vanishes past the cap; the fraction terminates on its own, but
    // cap the loop defensively.
    tail_depth = std::max(2, static_cast<int>(*model.state_cap) - hi_i + 4);
  }
  const LentzResult t_res = lentz_eval(tail, tol, tail_depth);
  if (!t_res.converged)
    throw NumericalError("transform_fij: continued fraction did not converge at depth " +
                         std::to_string(t_res.depth));

  const Complex denom = 1.0 / ds[static_cast<std::size_t>(hi_i)] + t_res.value;
  const Complex log_f = Complex(log_pref, 0.0) - (Complex(log_z, 0.0) + std::log(z)) -
                        std::log(denom);
  out.value = std::exp(log_f);
  out.trunc_err = std::abs(out.value) * t_res.err_est / std::abs(denom);
  out.rigorous = t_res.rigorous;
  return out;
}

}  // namespace detail

inline LaplaceFn transform_fij(const BdpModel& model, StateIndex i, StateIndex j,
                               bool multiply_by_s = false, int max_depth = 100000) {
  if (i < 0 || j < 0) throw ModelError("transform_fij: states must be nonnegative");
  LaplaceFn fn;
  fn.multiply_by_s = multiply_by_s;
  fn.eval = [model, i, j, multiply_by_s, max_depth](Complex s, double tol) {
    TransformEval e = detail::eval_fij(model, i, j, s, tol, max_depth);
    if (multiply_by_s) {
      e.value *= s;
      e.trunc_err *= std::abs(s);
    }
    return e;
  };
  return fn;
}

// Sum of f_ij over several target states j (first passage CDFs/densities).
inline LaplaceFn transform_sum(const BdpModel& model, StateIndex i,
                               const std::vector<StateIndex>& targets,
                               bool multiply_by_s = false, int max_depth = 100000) {
  std::vector<LaplaceFn> parts;
  parts.reserve(targets.size());
  for (StateIndex j : targets) parts.push_back(transform_fij(model, i, j, false, max_depth));
  LaplaceFn fn;
  fn.multiply_by_s = multiply_by_s;
  fn.eval = [parts, multiply_by_s](Complex s, double tol) {
    TransformEval sum;
    for (const auto& p : parts) {
      const TransformEval e = p.eval(s, tol);
      sum.value += e.value;
      sum.trunc_err += e.trunc_err;
      sum.rigorous = sum.rigorous && e.rigorous;
    }
    if (multiply_by_s) {
      sum.value *= s;
      sum.trunc_err *= std::abs(s);
    }
    return sum;
  };
  return fn;
}

// Parameters of the Fourier-series inversion.  A = gamma*ln(10) puts the
// discretization error near 10^-gamma.
struct InversionPlan {
  double gamma = 10.0;
  int series_terms = 500;  // partial sums before giving up (extended adaptively)
  int euler_terms = 11;    // binomial averaging window
  double trunc_tol = 0.0;  // 0: derived from gamma

  double A() const { return gamma * std::log(10.0); }
  double discretization_err() const {
    const double ea = std::exp(-A());
    return ea / (1.0 - ea);
  }
};

struct InversionResult {
  double value = 0.0;
  double err = 0.0;
  bool settled = true;  // false when the accelerated series failed to settle
};

// Inverts fn at t > 0:
//   P(t) = e^{A/2}/(2t) Re f(A/2t) + e^{A/2}/t sum_k (-1)^k Re f((A+2k pi i)/2t)
// with Euler (binomially weighted) summation over the alternating tail.
// err = discretization bound + propagated CF truncation + Euler tail estimate.
inline InversionResult invert(const LaplaceFn& fn, double t, const InversionPlan& plan) {
  if (t <= 0.0) throw NumericalError("invert: t must be positive");
  const double A = plan.A();
  const double coef = std::exp(A / 2.0) / t;
  const double ed = plan.discretization_err();
  // Per-contour-point CF tolerance, scaled so the accumulated CF error
  // stays an order of magnitude below the discretization budget.  The
  // floor acknowledges double precision.
  const double budget = plan.trunc_tol > 0.0 ? plan.trunc_tol : std::exp(-A);
  const double tol_pt =
      std::max(1e-15, budget * t / (std::exp(A / 2.0) * 10.0 * plan.series_terms));

  double trunc_sum = 0.0;
  const TransformEval e0 = fn.eval(Complex(A / (2.0 * t), 0.0), tol_pt);
  trunc_sum += e0.trunc_err;

  const int m = plan.euler_terms;
  std::vector<double> window;  // last m+1 partial sums
  std::vector<double> binom(static_cast<std::size_t>(m) + 1, 1.0);
  for (int r = 1; r <= m; ++r)
    binom[static_cast<std::size_t>(r)] =
        binom[static_cast<std::size_t>(r - 1)] * (m - r + 1) / r;
  const double two_pow_m = std::pow(2.0, m);

  auto euler_avg = [&](const std::vector<double>& w) {
    double acc = 0.0;
    for (int r = 0; r <= m; ++r) acc += binom[static_cast<std::size_t>(r)] * w[static_cast<std::size_t>(r)];
    return acc / two_pow_m;
  };

  double partial = coef / 2.0 * e0.value.real();
  double sign = -1.0;
  double prev_euler = 0.0, prev_euler2 = 0.0;
  int settled_streak = 0;
  const int hard_cap = plan.series_terms * 8;
  InversionResult out;
  out.settled = false;

  for (int k = 1; k <= hard_cap; ++k) {
    const Complex s(A / (2.0 * t), k * M_PI / t);
    const TransformEval e = fn.eval(s, tol_pt);
    trunc_sum += e.trunc_err;
    partial += coef * sign * e.value.real();
    sign = -sign;

    if (static_cast<int>(window.size()) == m + 1) window.erase(window.begin());
    window.push_back(partial);
    if (static_cast<int>(window.size()) < m + 1) continue;

    const double est = euler_avg(window);
    const double diff = std::abs(est - prev_euler);
    if (k > m + 2) {
      const double settle_tol = std::max(ed, 1e-13 * (1.0 + std::abs(est)));
      if (diff <= settle_tol)
        ++settled_streak;
      else
        settled_streak = 0;
      if (settled_streak >= 3 && k >= std::min(plan.series_terms, 30)) {
        out.value = est;
        out.err = ed + coef * trunc_sum + diff + std::abs(prev_euler - prev_euler2);
        out.settled = true;
        return out;
      }
    }
    prev_euler2 = prev_euler;
    prev_euler = est;
    out.value = est;
    out.err = ed + coef * trunc_sum + diff;
  }
  return out;  // best value, flagged unsettled
}

// P_ij(t) with its error budget.  Values are not clamped to [0,1] here.
inline InversionResult transition_probability(const BdpModel& model, StateIndex i,
                                              StateIndex j, double t,
                                              const InversionPlan& plan = {}) {
  return invert(transform_fij(model, i, j), t, plan);
}

// Grid of t (or accumulated-cost w) values with CDF and/or density
// columns and a per-point error budget.
struct DistCurve {
  std::vector<double> grid;
  std::vector<double> cdf;      // empty when absent
  std::vector<double> density;  // empty when absent
  std::vector<double> err;
  double tail_mass = 0.0;  // censored/defective mass beyond the grid (ECDFs)
  std::vector<std::string> warnings;
};

}  // namespace bdp

#endif  // BDP_LAPLACE_HPP
