#ifndef BDP_CONTFRAC_HPP
#define BDP_CONTFRAC_HPP

// Numerically stable continued fraction evaluation: modified Lentz
// convergents with an a-posteriori truncation bound, the Wallis
// three-term recurrence (test oracle, overflows at depth), and the
// denominator-ratio recurrence Z_{m+j} = B_{m+j}/B_m.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bdp/model.hpp"

namespace bdp {

using Complex = std::complex<double>;

class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A continued fraction a1/(b1 + a2/(b2 + ...)); coefficients are
// generated on demand, 1-based.
struct ContFrac {
  std::function<Complex(int)> a;
  std::function<Complex(int)> b;
};

// Fraction underlying f_00(s) for a BDP: a1 = 1, a_j = -lambda_{j-2} mu_{j-1},
// b_1 = s + lambda_0, b_j = s + lambda_{j-1} + mu_{j-1}.
inline ContFrac make_bdp_contfrac(const BdpModel& model, Complex s) {
  ContFrac cf;
  cf.a = [model](int j) -> Complex {
    if (j == 1) return Complex(1.0, 0.0);
    return Complex(-model.birth_rate(j - 2) * model.death_rate(j - 1), 0.0);
  };
  cf.b = [model, s](int j) -> Complex {
    return s + Complex(model.birth_rate(j - 1) + model.death_rate(j - 1), 0.0);
  };
  return cf;
}

struct LentzResult {
  Complex value{0.0, 0.0};
  int depth = 0;
  double err_est = 0.0;   // a-posteriori truncation bound on |f - f^(k)|
  bool rigorous = true;   // false when the bound falls back to the raw step size
  bool converged = true;  // false when max_depth was hit first
};

namespace detail {

constexpr double kLentzFloor = 1e-30;

// Same-phase replacement of near-zero intermediates.
inline Complex rescue_tiny(Complex z) {
  const double m = std::abs(z);
  if (m >= kLentzFloor) return z;
  if (m == 0.0) return Complex(kLentzFloor, 0.0);
  return z * (kLentzFloor / m);
}

}  // namespace detail

// Modified Lentz evaluation.  The error estimate is the convergent bound
//   |f - f^(k)| <= |B_k/B_{k-1}| / |Im(B_k/B_{k-1})| * |f^(k) - f^(k-1)|,
// with B_k/B_{k-1} = 1/D_k; it requires the ratio to have nonzero
// imaginary part, which holds on the inversion contour where Im(s) != 0.
// For real fractions the raw step |f^(k) - f^(k-1)| is reported instead
// and flagged non-rigorous.  A vanishing partial numerator terminates the
// fraction exactly (finite chains).
inline LentzResult lentz_eval(const ContFrac& cf, double tol, int max_depth = 100000) {
  if (tol <= 0.0) throw NumericalError("lentz_eval: tol must be positive");
  LentzResult out;
  if (cf.a(1) == Complex(0.0, 0.0)) {
    out.depth = 1;
    return out;  // fraction is exactly zero
  }
  Complex f(detail::kLentzFloor, 0.0);
  Complex c = f;
  Complex d(0.0, 0.0);
  for (int k = 1; k <= max_depth; ++k) {
    const Complex ak = cf.a(k);
    if (k > 1 && ak == Complex(0.0, 0.0)) {
      // tail contributes nothing: the previous convergent is exact
      out.depth = k - 1;
      out.err_est = 0.0;
      out.rigorous = true;
      out.value = f;
      return out;
    }
    const Complex bk = cf.b(k);
    d = detail::rescue_tiny(bk + ak * d);
    d = 1.0 / d;
    c = detail::rescue_tiny(bk + ak / c);
    const Complex delta = c * d;
    const Complex prev = f;
    f *= delta;
    out.depth = k;
    out.value = f;
    if (k >= 2) {
      const double step = std::abs(f - prev);
      const Complex ratio = 1.0 / d;  // B_k / B_{k-1}
      const double im = std::abs(ratio.imag());
      if (im > 0.0) {
        out.err_est = std::abs(ratio) / im * step;
        out.rigorous = true;
      } else {
        out.err_est = step;
        out.rigorous = false;
      }
      if (out.err_est <= tol) return out;
    }
  }
  out.converged = false;
  return out;
}

// Convergent numerator/denominator by the Wallis recurrence
//   A_k = b_k A_{k-1} + a_k A_{k-2},  B_k = b_k B_{k-1} + a_k B_{k-2},
// A_0 = 0, A_1 = a_1, B_0 = 1, B_1 = b_1.  Small k only: the terms grow
// geometrically and overflow to infinity at large depth (not trapped).
inline std::pair<Complex, Complex> wallis_convergent(const ContFrac& cf, int k) {
  if (k < 0) throw NumericalError("wallis_convergent: k must be >= 0");
  Complex a_prev(0.0, 0.0), b_prev(1.0, 0.0);  // A_0, B_0
  if (k == 0) return {a_prev, b_prev};
  Complex a_cur = cf.a(1), b_cur = cf.b(1);  // A_1, B_1
  for (int j = 2; j <= k; ++j) {
    const Complex aj = cf.a(j), bj = cf.b(j);
    const Complex a_next = bj * a_cur + aj * a_prev;
    const Complex b_next = bj * b_cur + aj * b_prev;
    a_prev = a_cur;
    b_prev = b_cur;
    a_cur = a_next;
    b_cur = b_next;
  }
  return {a_cur, b_cur};
}

// Denominator ratios D_k = B_{k-1}/B_k for k = 1..depth, by the stable
// Lentz D recurrence.  Runs the fraction to a fixed depth regardless of
// convergence (used to seed transform assembly).
inline std::vector<Complex> lentz_d_values(const ContFrac& cf, int depth) {
  std::vector<Complex> ds;
  ds.reserve(static_cast<std::size_t>(depth));
  Complex d(0.0, 0.0);
  for (int k = 1; k <= depth; ++k) {
    d = detail::rescue_tiny(cf.b(k) + cf.a(k) * d);
    d = 1.0 / d;
    ds.push_back(d);
  }
  return ds;
}

namespace detail {

// B_{m+j}/B_m as (log-magnitude offset, scaled value).  ratio_first must
// be B_{m+1}/B_m, i.e. the reciprocal of the Lentz D value at depth m+1.
// Rescaling keeps the recurrence in range for long index gaps.
inline std::pair<double, Complex> denominator_ratio_scaled(const ContFrac& cf, int m, int j,
                                                           Complex ratio_first) {
  if (j < 0) throw NumericalError("denominator_ratio: offset must be >= 0");
  double log_scale = 0.0;
  Complex z_prev(1.0, 0.0);  // Z_0 = B_m/B_m
  if (j == 0) return {0.0, z_prev};
  Complex z = ratio_first;  // Z_1 = B_{m+1}/B_m
  for (int t = 2; t <= j; ++t) {
    const Complex z_next = cf.b(m + t) * z + cf.a(m + t) * z_prev;
    z_prev = z;
    z = z_next;
    const double mag = std::abs(z);
    if (mag > 1e100) {
      z /= mag;
      z_prev /= mag;
      log_scale += std::log(mag);
    }
  }
  return {log_scale, z};
}

}  // namespace detail

// B_{m+j}/B_m by the Z recurrence, seeded with the Lentz denominator
// ratio at depth m (ratio_Bm_over_Bm1 = B_m/B_{m+1}).
inline Complex denominator_ratio(const ContFrac& cf, int m, int j, Complex ratio_Bm_over_Bm1) {
  auto [log_scale, z] = detail::denominator_ratio_scaled(cf, m, j, 1.0 / ratio_Bm_over_Bm1);
  return z * std::exp(log_scale);
}

}  // namespace bdp

#endif  // BDP_CONTFRAC_HPP
