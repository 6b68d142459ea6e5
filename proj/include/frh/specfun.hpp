#pragma once

#include <functional>
#include <string>
#include <vector>

#include "frh/errors.hpp"

namespace frh::specfun {

// ---------------------------------------------------------------------------
// Gamma-family primitives
// ---------------------------------------------------------------------------

// Reciprocal gamma 1/Gamma(x). Entire: returns exactly 0 at non-positive
// integers, so asymptotic coefficients like 1/Gamma(1-2b) vanish smoothly
// at b = 1/2 instead of needing a pole special case.
double gamma_rec(double x);

// log|Gamma(x)| with the sign of Gamma(x) in *sign (0 at poles).
double log_abs_gamma(double x, int* sign = nullptr);

// Gamma(x) for x not a non-positive integer; +-inf on overflow.
double gamma(double x);

// sin(pi*x) with exact argument reduction at integers.
double sinpi(double x);
double cospi(double x);

// Imaginary error function, erfi(x) = -i erf(ix), by its everywhere-
// convergent power series with compensated summation. Odd in x.
double erfi(double x);

// ---------------------------------------------------------------------------
// Mittag-Leffler evaluation
// ---------------------------------------------------------------------------

enum class MLStrategy { PowerSeries, Asymptotic, ContourQuadrature };

struct MLQuery {
  double a = 1.0;  // first order, > 0
  double b = 1.0;  // second parameter, > 0
  double x = 0.0;  // real argument; the validated envelope is x <= 0
};

struct MLResult {
  double value = 0.0;
  double est_abs_error = 0.0;
  MLStrategy strategy = MLStrategy::PowerSeries;
};

const char* strategy_name(MLStrategy s);

// E_{a,b}(x) to the requested relative accuracy (absolute near zeros of the
// function). Strategy is selected deterministically from (a, b, x).
// Throws NonConvergence outside the validated envelope.
MLResult ml_eval(const MLQuery& q, double target_rel_err = 1e-11);

// Plain N-term algebraic asymptotic partial sum for E_{a,b}(x), x < 0 large:
//   -sum_{k=1..N} x^{-k} / Gamma(b - a k).
// The magnitude of term N+1 is written to *trunc_estimate when non-null.
// Requires a in (0,2); throws DomainError otherwise.
double ml_asymptotic(const MLQuery& q, int n_terms,
                     double* trunc_estimate = nullptr);

// ---------------------------------------------------------------------------
// Zeros of E_a(-x)
// ---------------------------------------------------------------------------

struct MLZeros {
  std::vector<double> zeros;  // strictly increasing, on (0, x_max]
  bool complete = false;      // no further zeros possible beyond x_max
};

// Dense sign-scan plus bracketed refinement for the zeros of x -> E_a(-x)
// on (0, x_max]. `complete` is certified from the decay of the leading
// asymptotic term past x_max. Throws TangentialZeroSuspected on a
// sign-preserving near-zero dip.
MLZeros ml_zeros(double a, double x_max);

// ---------------------------------------------------------------------------
// Generic numerics
// ---------------------------------------------------------------------------

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

// Brent refinement of a strict sign-change bracket to +-tol; bisection
// fallback guarantees termination. Throws BadBracket if f_lo*f_hi >= 0.
double refine_root(const std::function<double(double)>& f,
                   const RootBracket& bracket, double tol);

struct Derivative {
  double value = 0.0;
  double est_abs_error = 0.0;
};

// Central difference with one Richardson extrapolation step. The error
// estimate is the difference between the two stencil orders.
Derivative diff_central(const std::function<double(double)>& f, double t,
                        double h0);

// ---------------------------------------------------------------------------
// Internals exposed for cross-strategy consistency checks
// ---------------------------------------------------------------------------
namespace detail {

struct Eval {
  double value = 0.0;
  double est = 0.0;
  bool ok = false;
};

Eval ml_series(double a, double b, double x);
// Asymptotic partial sum at the optimal truncation index, plus the exact
// conjugate-pole residue pair for a in (1,2) (the transiently dominant
// oscillatory component on the negative axis).
Eval ml_asym_full(double a, double b, double x);
Eval ml_quadrature(double a, double b, double x, double tol);

// Predicted absolute errors used by the deterministic strategy selection.
double predict_series_abs_err(double a, double b, double x);
double predict_asym_abs_err(double a, double b, double x);
bool quadrature_admissible(double a, double b);

}  // namespace detail

}  // namespace frh::specfun
