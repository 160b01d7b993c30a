#ifndef BDP_TESTS_ORACLES_HPP
#define BDP_TESTS_ORACLES_HPP

// Independent numerical oracles for the test suite.  Nothing here shares
// code with the library's transform pipeline: the resolvent column uses a
// dense tridiagonal solve, the Wallis convergents run in extended
// precision, and the quadrature/differentiation helpers are classical
// textbook routines.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bdp/contfrac.hpp"
#include "bdp/model.hpp"

namespace oracles {

using Complex = std::complex<double>;
using LongComplex = std::complex<long double>;

// Solves (sI - Q) x = e_j on states 0..N for a BDP generator Q
// (tridiagonal, Q_{n,n+1} = lambda_n, Q_{n,n-1} = mu_n) by the Thomas
// algorithm.  x[i] is the truncated-chain transform f_ij(s).
inline std::vector<Complex> resolvent_column(const bdp::BdpModel& model, long N, Complex s,
                                             long j) {
  if (j < 0 || j > N) throw std::invalid_argument("resolvent_column: j out of range");
  std::vector<Complex> sub(N + 1), diag(N + 1), sup(N + 1), rhs(N + 1, Complex(0.0));
  for (long n = 0; n <= N; ++n) {
    const double lam = model.birth_rate(n);
    const double mu = model.death_rate(n);
    diag[n] = s + Complex(lam + mu);
    if (n > 0) sub[n] = Complex(-mu);
    if (n < N) sup[n] = Complex(-lam);
  }
  rhs[j] = Complex(1.0);
  for (long n = 1; n <= N; ++n) {
    const Complex w = sub[n] / diag[n - 1];
    diag[n] -= w * sup[n - 1];
    rhs[n] -= w * rhs[n - 1];
  }
  std::vector<Complex> x(N + 1);
  x[N] = rhs[N] / diag[N];
  for (long n = N - 1; n >= 0; --n) x[n] = (rhs[n] - sup[n] * x[n + 1]) / diag[n];
  return x;
}

// Wallis three-term recurrence in long double precision.  Returns the
// k-th convergent A_k/B_k together with the denominator B_k (scaled; the
// ratio is what matters).  Usable only at modest depth before overflow,
// which is exactly the regime the tests probe.
struct WallisConvergent {
  LongComplex value;        // A_k / B_k
  LongComplex denom_ratio;  // B_k / B_{k-1}
};

inline WallisConvergent wallis_longdouble(const bdp::ContFrac& cf, int k) {
  if (k < 1) throw std::invalid_argument("wallis_longdouble: k must be >= 1");
  auto lift = [](Complex z) { return LongComplex(z.real(), z.imag()); };
  LongComplex a_prev(0.0L), b_prev(1.0L);                  // A_0, B_0
  LongComplex a_cur = lift(cf.a(1)), b_cur = lift(cf.b(1));  // A_1, B_1
  for (int j = 2; j <= k; ++j) {
    const LongComplex aj = lift(cf.a(j)), bj = lift(cf.b(j));
    const LongComplex a_next = bj * a_cur + aj * a_prev;
    const LongComplex b_next = bj * b_cur + aj * b_prev;
    a_prev = a_cur;
    b_prev = b_cur;
    a_cur = a_next;
    b_cur = b_next;
  }
  return {a_cur / b_cur, b_cur / b_prev};
}

// Adaptive Simpson quadrature on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int depth = 30) {
  struct Rec {
    static double run(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double whole, double tol, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) < 15.0 * tol)
        return left + right + delta / 15.0;
      return run(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
             run(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    }
  };
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec::run(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Central finite difference.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracles

#endif  // BDP_TESTS_ORACLES_HPP
