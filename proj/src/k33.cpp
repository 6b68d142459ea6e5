#include "frh/k33.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "frh/config.hpp"
#include "frh/specfun.hpp"

namespace frh::k33 {

namespace sf = frh::specfun;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog3 = 1.09861228866810969140;
constexpr int kHarm = 2;  // key of harmonic 1/3 (keys are 6x wavenumber)

void validate_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError("k33: beta must lie in (0, 1]");
}

int halffloor_sign(int n) { return (n / 2) % 2 == 0 ? 1 : -1; }

double lgamma_pos(double x) { return sf::log_abs_gamma(x); }

// value = f * 2^e with f normalized by frexp; power-of-two scaling is exact,
// so this representation adds no rounding beyond the double operations
struct FE {
  double f = 0.0;
  long e = 0;
};

FE fe_make(double x, long e = 0) {
  if (x == 0.0 || !std::isfinite(x)) return {};
  int k = 0;
  double f = std::frexp(x, &k);
  return {f, e + k};
}

FE fe_mul(const FE& a, const FE& b) {
  if (a.f == 0.0 || b.f == 0.0) return {};
  return fe_make(a.f * b.f, a.e + b.e);
}

double fe_log_abs(const FE& a) {
  return a.f == 0.0 ? -kInf
                    : std::log(std::abs(a.f)) + a.e * 0.6931471805599453;
}

// compensated scaled sum of FE terms
FE fe_sum(const std::vector<FE>& terms) {
  long emax = 0;
  bool any = false;
  for (const auto& t : terms) {
    if (t.f == 0.0) continue;
    if (!any || t.e > emax) emax = t.e;
    any = true;
  }
  if (!any) return {};
  double s = 0.0, c = 0.0;  // Kahan
  for (const auto& t : terms) {
    if (t.f == 0.0) continue;
    long sh = t.e - emax;
    if (sh < -1060) continue;
    double v = std::ldexp(t.f, static_cast<int>(sh));
    double y = v - c;
    double u = s + y;
    c = (u - s) - y;
    s = u;
  }
  return fe_make(s, emax);
}

}  // namespace

std::vector<ScaledTrigPoly> oracle_iterate(double beta, int n_max) {
  validate_beta(beta);
  if (n_max < 0 || n_max > 600)
    throw DomainError("k33: oracle iteration supports n_max in [0, 600]");

  // A = d_x + d_x^3 acts per harmonic as (1 - k^2) d_x; harmonic 1 dies.
  auto mult = [](double k) { return 1.0 - k * k; };

  std::vector<ScaledTrigPoly> u;
  {
    ScaledTrigPoly u0;
    u0.poly.add_term(kHarm, std::sqrt(1.5), 0.0);
    u0.normalize();
    u.push_back(u0);
  }

  // pair convolutions v[m] = sum_{i+j=m} u_i u_j, built as needed
  std::vector<ScaledTrigPoly> v;
  auto scaled_sum = [](std::vector<ScaledTrigPoly>&& parts) {
    double m = -kInf;
    for (const auto& p : parts) {
      if (p.poly.max_abs_coeff() > 0.0) m = std::max(m, p.log_scale);
    }
    ScaledTrigPoly out;
    if (m == -kInf) return out;
    for (auto& p : parts) {
      double f = std::exp(p.log_scale - m);
      if (f == 0.0) continue;
      p.poly *= f;
      out.poly += p.poly;
    }
    out.log_scale = m;
    return out;
  };

  for (int n = 0; n < n_max; ++n) {
    {
      std::vector<ScaledTrigPoly> parts;
      for (int i = 0; i <= n; ++i)
        parts.push_back(
            {u[i].poly * u[n - i].poly, u[i].log_scale + u[n - i].log_scale});
      v.push_back(scaled_sum(std::move(parts)));
    }
    std::vector<ScaledTrigPoly> parts;
    for (int k = 0; k <= n; ++k)
      parts.push_back(
          {u[k].poly * v[n - k].poly, u[k].log_scale + v[n - k].log_scale});
    ScaledTrigPoly w = scaled_sum(std::move(parts));

    ScaledTrigPoly next;
    next.poly = w.poly.map_first_derivative(mult);
    next.poly *= -1.0;  // u_{n+1} = -J^beta [A w_n]
    next.log_scale = w.log_scale + lgamma_pos(1.0 + beta * n) -
                     lgamma_pos(1.0 + beta * (n + 1));
    next.normalize();
    next.poly.prune(1e-18);
    u.push_back(next);
  }
  return u;
}

double CoeffSeq::log_abs_c(int n) const {
  if (sign_e[n] == 0) return -kInf;
  return log_e[n] + lgamma_pos(1.0 + beta * n) + n * kLog3;
}

double CoeffSeq::c(int n) const {
  if (sign_e[n] == 0) return 0.0;
  return sign_e[n] * std::exp(log_abs_c(n));
}

namespace {

// Gamma(1+bn)/Gamma(1+b(n+1)); plain ratio while both fit in double
double step_gamma_ratio(double beta, int n) {
  double hi = 1.0 + beta * (n + 1);
  if (hi < 170.0) return sf::gamma(1.0 + beta * n) / sf::gamma(hi);
  return std::exp(lgamma_pos(1.0 + beta * n) - lgamma_pos(hi));
}

void fill_outputs(CoeffSeq& seq, const std::vector<FE>& e) {
  for (int n = 0; n <= seq.n_max; ++n) {
    if (e[n].f == 0.0) continue;
    seq.sign_e[n] = e[n].f > 0.0 ? 1 : -1;
    seq.log_e[n] = fe_log_abs(e[n]);
    if (n >= 1) seq.gamma_n[n] = 3.0 * std::exp(seq.log_e[n] / n);
  }
}

CoeffSeq run_recurrence(double beta, int n_max) {
  CoeffSeq seq;
  seq.beta = beta;
  seq.n_max = n_max;
  seq.sign_e.assign(n_max + 1, 0);
  seq.log_e.assign(n_max + 1, -kInf);
  seq.gamma_n.assign(n_max + 1, 0.0);

  // a_i = (-1)^{floor(i/2)} e_i; e_0 = c_0 = 1
  std::vector<FE> a(n_max + 1);
  a[0] = fe_make(1.0);

  // ordered-pair convolutions of a, split by parity class
  std::vector<FE> qee(n_max + 1), qoo(n_max + 1), qeo(n_max + 1);
  const FE third = fe_make(1.0 / 3.0);

  std::vector<FE> buf;
  for (int n = 0; n < n_max; ++n) {
    {
      std::vector<FE> tee, too, teo;
      for (int i = 0; i <= n; ++i) {
        FE t = fe_mul(a[i], a[n - i]);
        if (t.f == 0.0) continue;
        bool ie = i % 2 == 0, je = (n - i) % 2 == 0;
        if (ie && je)
          tee.push_back(t);
        else if (!ie && !je)
          too.push_back(t);
        else
          teo.push_back(t);
      }
      qee[n] = fe_sum(tee);
      qoo[n] = fe_sum(too);
      qeo[n] = fe_sum(teo);
    }

    // S_n with the 3^{-sigma} weight: sigma = 0 for an all-even or all-odd
    // parity triple, 1 otherwise
    buf.clear();
    for (int k = 0; k <= n; ++k) {
      if (a[k].f == 0.0) continue;
      int m = n - k;
      if (k % 2 == 0) {
        buf.push_back(fe_mul(a[k], qee[m]));
        buf.push_back(fe_mul(a[k], fe_mul(qoo[m], third)));
        buf.push_back(fe_mul(a[k], fe_mul(qeo[m], third)));
      } else {
        buf.push_back(fe_mul(a[k], qoo[m]));
        buf.push_back(fe_mul(a[k], fe_mul(qee[m], third)));
        buf.push_back(fe_mul(a[k], fe_mul(qeo[m], third)));
      }
    }
    FE s = fe_sum(buf);

    // e_{n+1} = (-1)^{floor(n/2)} [G(1+bn) / (3 G(1+b(n+1)))] S_n;
    // a_{n+1} = (-1)^{floor((n+1)/2)} e_{n+1} = (-1)^n ratio S_n / 3
    FE scaled = fe_mul(s, fe_make(step_gamma_ratio(beta, n) / 3.0));
    a[n + 1] = (n % 2 == 0) ? scaled : FE{-scaled.f, scaled.e};
  }

  std::vector<FE> e(n_max + 1);
  for (int n = 0; n <= n_max; ++n)
    e[n] = halffloor_sign(n) == 1 ? a[n] : FE{-a[n].f, a[n].e};
  fill_outputs(seq, e);
  return seq;
}

// Exact integer route for beta = 1: every quantity is rational and the
// triple sums fit in __int128 up to n = 80, so c_n(1) = 1 is verified
// without cancellation loss.
CoeffSeq run_exact_classical(int n_max) {
  using I = __int128;
  CoeffSeq seq;
  seq.beta = 1.0;
  seq.n_max = n_max;
  seq.sign_e.assign(n_max + 1, 1);
  seq.log_e.assign(n_max + 1, 0.0);
  seq.gamma_n.assign(n_max + 1, 0.0);

  std::vector<std::vector<I>> binom(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    binom[n].assign(n + 1, 1);
    for (int k = 1; k < n; ++k)
      binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
  }

  for (int n = 0; n < n_max; ++n) {
    // J_n = sum over ordered triples of sign * 3^{1-sigma} * multinomial;
    // c_{n+1} = 1 requires J_n = 3 (-1)^{floor(n/2)} exactly
    I j = 0;
    for (int i = 0; i <= n; ++i) {
      for (int k = 0; i + k <= n; ++k) {
        int m = n - i - k;
        I mult = binom[n][i] * binom[n - i][k];
        int sgn = halffloor_sign(i) * halffloor_sign(k) * halffloor_sign(m);
        int par = (i % 2) + (k % 2) + (m % 2);
        bool same = par == 0 || par == 3;
        j += (same ? I(3) : I(1)) * (sgn > 0 ? mult : -mult);
      }
    }
    if (j != I(3) * halffloor_sign(n))
      throw OracleMismatch(
          "k33: exact classical identity failed at n = " + std::to_string(n));
  }

  for (int n = 0; n <= n_max; ++n) {
    // c_n = 1 exactly: e_n = 1/(n! 3^n)
    seq.log_e[n] = -lgamma_pos(1.0 + n) - n * kLog3;
    if (n >= 1) seq.gamma_n[n] = 3.0 * std::exp(seq.log_e[n] / n);
  }
  return seq;
}

}  // namespace

CoeffSeq c_sequence(double beta, int n_max) {
  validate_beta(beta);
  if (n_max < 3 || n_max > 600)
    throw DomainError("k33: coefficient sequence supports n_max in [3, 600]");
  const auto& cfg = frh::config();

  if (beta == 1.0) {
    // the classical limit cancels by ~3^n inside the recurrence, beyond any
    // floating representation; the exact integer route is loss-free
    if (n_max > 80)
      throw DomainError(
          "k33: classical-limit sequence supports n_max up to 80");
    return run_exact_classical(n_max);
  }

  CoeffSeq seq = run_recurrence(beta, n_max);

  // mandatory self-check: the printed recurrence once carried a sign
  // misprint, so the closed form is never trusted without the trig oracle
  int n_check = std::min(n_max, cfg.k33_oracle_check_n);
  auto orc = oracle_iterate(beta, n_check);
  for (int n = 0; n <= n_check; ++n) {
    bool even = n % 2 == 0;
    double coeff =
        even ? orc[n].poly.cos_coeff(kHarm) : orc[n].poly.sin_coeff(kHarm);
    int sign_orc =
        (coeff > 0 ? 1 : coeff < 0 ? -1 : 0) * halffloor_sign(n);
    double log_c_orc = std::log(std::abs(coeff)) + orc[n].log_scale +
                       0.5 * std::log(2.0) + (n - 0.5) * kLog3 +
                       lgamma_pos(1.0 + beta * n);
    double log_c_rec = seq.log_abs_c(n);
    bool ok = sign_orc == seq.sign_e[n] &&
              std::abs(std::expm1(log_c_orc - log_c_rec)) <
                  cfg.k33_oracle_check_rel;
    if (!ok)
      throw OracleMismatch(
          "k33: recurrence disagrees with the trig oracle at n = " +
          std::to_string(n) + " (beta = " + std::to_string(beta) + ")");
  }
  return seq;
}

GammaRadius gamma_radius(const CoeffSeq& seq) {
  const auto& cfg = frh::config();
  int n_lo = static_cast<int>(std::ceil((1.0 - cfg.k33_tail_fraction) *
                                        seq.n_max));
  n_lo = std::max(n_lo, 2);
  if (seq.n_max - n_lo < 8)
    throw NotConverged("k33: sequence too short for a tail estimate");

  // settledness gate on the trailing window
  double mean = 0.0;
  int count = 0;
  for (int n = n_lo; n <= seq.n_max; ++n) {
    if (seq.sign_e[n] == 0)
      throw NotConverged("k33: vanishing coefficient inside the tail window");
    mean += seq.gamma_n[n];
    ++count;
  }
  mean /= count;
  double var = 0.0;
  for (int n = n_lo; n <= seq.n_max; ++n) {
    double d = seq.gamma_n[n] - mean;
    var += d * d;
  }
  var /= (count - 1);
  if (var / (mean * mean) > cfg.k33_tail_rel_variance)
    throw NotConverged("k33: gamma_n tail variance above threshold");

  // gamma_n keeps a slow log-type drift long after the variance gate is
  // met, so the n -> inf extrapolation over-corrects; the tabulated radii
  // correspond to the root test read at expansion depth ~ n_max/2. Average
  // a window centered there.
  int n_ref = seq.n_max / 2;
  int w = std::max(4, seq.n_max / 20);
  double g = 0.0;
  int gc = 0;
  for (int n = std::max(2, n_ref - w); n <= std::min(seq.n_max, n_ref + w);
       ++n) {
    if (seq.sign_e[n] == 0)
      throw NotConverged("k33: vanishing coefficient in the reading window");
    g += seq.gamma_n[n];
    ++gc;
  }
  g /= gc;
  if (!(g > 0.0)) throw NotConverged("k33: gamma estimate is not positive");

  GammaRadius out;
  out.gamma_est = g;
  out.radius = std::pow(3.0 / g, 1.0 / seq.beta);
  return out;
}

Series::Series(double beta, int n_max)
    : seq_(c_sequence(beta, beta == 1.0 ? std::min(n_max, 80) : n_max)) {
  margin_ = frh::config().k33_radius_margin;
  try {
    radius_ = gamma_radius(seq_).radius;
  } catch (const NotConverged&) {
    // entire-series signature (beta = 1 limit): gamma_n decays through the
    // whole tail instead of settling
    int n_lo = static_cast<int>(std::ceil(0.8 * seq_.n_max));
    bool decaying = true;
    for (int n = n_lo + 1; n <= seq_.n_max; ++n)
      decaying = decaying && seq_.gamma_n[n] < seq_.gamma_n[n - 1];
    if (decaying && seq_.gamma_n[seq_.n_max] < 0.9 * seq_.gamma_n[n_lo])
      radius_ = kInf;
    else
      throw;
  }
}

void Series::partial_sums(double t, int n_cap, double* ec, double* es,
                          bool guarded) const {
  const auto& cfg = frh::config();
  double lt = t > 0.0 ? std::log(t) : 0.0;
  double sc = 0.0, ss = 0.0;
  double last = 0.0;
  for (int n = 0; n <= n_cap; ++n) {
    if (seq_.sign_e[n] == 0) continue;
    if (t == 0.0 && n > 0) break;
    double lterm = seq_.log_e[n] + seq_.beta * n * lt;
    double v = seq_.sign_e[n] * halffloor_sign(n) * std::exp(lterm);
    if (n % 2 == 0)
      sc += v;
    else
      ss += v;
    last = std::abs(v);
    double scale = std::abs(sc) + std::abs(ss);
    if (guarded && n >= 8 && last < cfg.k33_eval_term_cutoff * scale) break;
  }
  if (guarded && last > 5e-3 * (std::abs(sc) + std::abs(ss)))
    throw NonConvergence("k33: partial sums not settled at t = " +
                         std::to_string(t));
  *ec = std::sqrt(1.5) * sc;
  *es = std::sqrt(1.5) * ss;
}

Series::Eval Series::eval(double x, double t) const {
  if (t < 0.0) throw DomainError("k33: t must be >= 0");
  if (std::isfinite(radius_) && t >= radius_ * (1.0 - margin_))
    throw OutsideRadius(
        "k33: t = " + std::to_string(t) +
            " at or beyond the convergence radius R = " +
            std::to_string(radius_) + " (margin " + std::to_string(margin_) +
            ")",
        radius_);

  double ec = 0.0, es = 0.0;
  partial_sums(t, seq_.n_max, &ec, &es, true);

  Eval out;
  out.u = ec * std::cos(x / 3.0) + es * std::sin(x / 3.0);
  out.amplitude = std::hypot(ec, es);

  // unwrap the angle of (E_c, E_s) along a path from 0 to t
  double theta_prev = 0.0;
  double t_prev = 0.0;
  std::function<void(double)> advance = [&](double tt) {
    double c = 0.0, s = 0.0;
    partial_sums(tt, seq_.n_max, &c, &s, true);
    double raw = std::atan2(s, c);
    double theta =
        raw + 2.0 * kPi * std::round((theta_prev - raw) / (2.0 * kPi));
    if (std::abs(theta - theta_prev) >= 0.25 * kPi) {
      if (tt - t_prev < 1e-9 * std::max(1.0, tt))
        throw UnwrapAmbiguity("k33: phase jump unresolved near t = " +
                              std::to_string(tt));
      advance(0.5 * (t_prev + tt));
      advance(tt);
      return;
    }
    theta_prev = theta;
    t_prev = tt;
  };
  if (t > 0.0) advance(t);
  out.phase = 3.0 * theta_prev;
  return out;
}

double Series::partial_sum_amplitude(int n_terms, double t) const {
  if (n_terms < 0 || n_terms > seq_.n_max)
    throw DomainError("k33: partial sum index exceeds the built sequence");
  double ec = 0.0, es = 0.0;
  partial_sums(t, n_terms, &ec, &es, false);
  return std::hypot(ec, es);
}

void Series::partial_sum_components(int n_terms, double t, double* ec,
                                    double* es) const {
  if (n_terms < 0 || n_terms > seq_.n_max)
    throw DomainError("k33: partial sum index exceeds the built sequence");
  partial_sums(t, n_terms, ec, es, false);
}

ShortAsymp short_asymp(double beta, double t) {
  validate_beta(beta);
  double g1 = sf::gamma_rec(1.0 + beta);
  double coeff = sf::gamma_rec(1.0 + 2.0 * beta) - 0.5 * g1 * g1;
  ShortAsymp out;
  out.amplitude = std::sqrt(1.5) -
                  coeff / (3.0 * std::sqrt(6.0)) * std::pow(t, 2.0 * beta);
  out.phase = std::pow(t, beta) * g1;
  return out;
}

}  // namespace frh::k33
