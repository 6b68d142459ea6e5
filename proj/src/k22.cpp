#include "frh/k22.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frh/config.hpp"
#include "frh/specfun.hpp"

namespace frh::k22 {

namespace sf = frh::specfun;

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp_tol(double tol) {
  return std::clamp(tol, 1e-14, 1e-6);
}

struct Components {
  double d = 1.0;  // E_{2b}(-t^{2b}/4): denominator of tan(phase/2)
  double n = 0.0;  // (t^b/2) E_{2b,1+b}(-t^{2b}/4): numerator
};

Components components(double beta, double t, double tol = 1e-11) {
  if (t == 0.0) return {1.0, 0.0};
  double tb = std::pow(t, beta);
  double arg = -0.25 * tb * tb;
  double tt = clamp_tol(tol);
  Components c;
  c.d = sf::ml_eval({2.0 * beta, 1.0, arg}, tt).value;
  c.n = 0.5 * tb * sf::ml_eval({2.0 * beta, 1.0 + beta, arg}, tt).value;
  return c;
}

double amplitude_derivative(double beta, double t) {
  double h0 = frh::config().diff_h0_scale * std::max(1.0, t);
  return sf::diff_central([&](double s) { return amplitude(beta, s); }, t, h0)
      .value;
}

void validate_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError("k22: beta must lie in (0, 1]");
}

}  // namespace

Params::Params(double alpha_, double beta_, double c_)
    : alpha(alpha_), beta(beta_), c(c_) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw DomainError("k22: alpha must lie in (0, 2]");
  validate_beta(beta);
  if (!(c > 0.0)) throw DomainError("k22: wave speed must be positive");
}

double Params::gamma_factor() const {
  return std::pow(2.0, 1.0 - alpha) * (std::pow(2.0, alpha) - 1.0) / 3.0;
}

double coefficient(int n, const Params& p, double x, double t) {
  if (n < 0) throw DomainError("k22: coefficient index must be >= 0");
  if (n == 0) {
    double cq = std::cos(0.25 * x);
    return (4.0 * p.c / 3.0) * cq * cq;
  }
  double gc = p.gamma_factor() * p.c;
  double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;  // (-1)^{floor(n/2)}
  double psi = (n % 2 == 0) ? std::cos(0.5 * x) : std::sin(0.5 * x);
  return sign * (2.0 * p.c / 3.0) * std::pow(gc, n) *
         std::pow(t, p.beta * n) * sf::gamma_rec(1.0 + p.beta * n) * psi;
}

double solution(const Params& p, double x, double t, double tol) {
  if (t < 0.0) throw DomainError("k22: t must be >= 0");
  double tt = clamp_tol(tol);
  double y = p.gamma_factor() * p.c * std::pow(t, p.beta);
  if (t == 0.0) y = 0.0;
  double arg = -y * y;
  double ec = sf::ml_eval({2.0 * p.beta, 1.0, arg}, tt).value;
  double es = sf::ml_eval({2.0 * p.beta, 1.0 + p.beta, arg}, tt).value;
  return (2.0 * p.c / 3.0) *
         (1.0 + std::cos(0.5 * x) * ec + std::sin(0.5 * x) * y * es);
}

std::vector<TrigPoly> oracle_iterate(const Params& p, int n_max) {
  if (n_max < 0 || n_max > 60)
    throw DomainError("k22: oracle iteration supports n_max in [0, 60]");

  // dispersion multiplier per harmonic: |k|^alpha - 1 (exactly 0 at k = 1)
  auto mult = [&](double k) { return std::pow(std::abs(k), p.alpha) - 1.0; };

  std::vector<TrigPoly> u;
  TrigPoly u0;  // (4c/3) cos^2(x/4) = (2c/3)(1 + cos(x/2))
  u0.add_term(0, 2.0 * p.c / 3.0, 0.0);
  u0.add_term(3, 2.0 * p.c / 3.0, 0.0);
  u.push_back(u0);

  for (int n = 0; n < n_max; ++n) {
    TrigPoly w;
    for (int k = 0; k <= n; ++k) w += u[k] * u[n - k];
    TrigPoly rhs = w.map_first_derivative(mult);
    // J^beta multiplies the t^{beta n} coefficient by G(1+bn)/G(1+b(n+1))
    double ratio = sf::gamma(1.0 + p.beta * n) /
                   sf::gamma(1.0 + p.beta * (n + 1));
    rhs *= ratio;
    rhs.prune(1e-300);
    u.push_back(rhs);
  }
  return u;
}

double normalize_time(const Params& p, double t) {
  return std::pow(2.0 * p.gamma_factor() * p.c, 1.0 / p.beta) * t;
}

double amplitude(double beta, double t) {
  validate_beta(beta);
  auto c = components(beta, t);
  return std::hypot(c.d, c.n);
}

double phase_derivative(double beta, double t) {
  validate_beta(beta);
  double h0 = frh::config().diff_h0_scale * std::max(1.0, t);
  auto dpart = sf::diff_central(
      [&](double s) { return components(beta, s).d; }, t, h0);
  auto npart = sf::diff_central(
      [&](double s) { return components(beta, s).n; }, t, h0);
  auto c = components(beta, t);
  return 2.0 * (npart.value * c.d - c.n * dpart.value) /
         (c.d * c.d + c.n * c.n);
}

std::vector<AmpPhaseSample> amplitude_phase(double beta,
                                            std::span<const double> t_grid) {
  validate_beta(beta);
  const auto& cfg = frh::config();
  if (t_grid.empty() || t_grid.front() != 0.0)
    throw DomainError("k22: amplitude/phase grid must start at t = 0");

  std::vector<AmpPhaseSample> out;
  out.push_back({0.0, 1.0, 0.0, 0});
  double t_prev = 0.0;
  double theta_prev = 0.0;

  auto theta_at = [&](double t, double ref) {
    auto c = components(beta, t);
    double raw = std::atan2(c.n, c.d);
    double k = std::round((ref - raw) / (2.0 * kPi));
    return std::make_pair(raw + 2.0 * kPi * k, std::hypot(c.d, c.n));
  };

  // refine segments until the unwrapped angle moves by < pi/4 per step
  std::function<void(double)> advance = [&](double t) {
    auto [theta, amp] = theta_at(t, theta_prev);
    if (std::abs(theta - theta_prev) >= 0.5 * cfg.unwrap_max_jump) {
      double mid = 0.5 * (t_prev + t);
      if (t - t_prev < cfg.unwrap_min_step * std::max(1.0, t))
        throw UnwrapAmbiguity(
            "k22: phase jump unresolved at minimum step near t = " +
            std::to_string(t));
      advance(mid);
      advance(t);
      return;
    }
    int branch = static_cast<int>(std::floor(theta / kPi + 0.5));
    out.push_back({t, amp, 2.0 * theta, branch});
    t_prev = t;
    theta_prev = theta;
  };

  for (size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1]))
      throw DomainError("k22: t grid must be strictly increasing");
    advance(t_grid[i]);
  }
  return out;
}

double asymp_amplitude(double beta, double t, Regime regime) {
  validate_beta(beta);
  if (regime == Regime::Short) {
    double coeff = 2.0 * sf::gamma_rec(1.0 + 2.0 * beta) -
                   sf::gamma_rec(1.0 + beta) * sf::gamma_rec(1.0 + beta);
    return 1.0 - 0.125 * std::pow(t, 2.0 * beta) * coeff;
  }
  // reciprocal gamma keeps the coefficient exactly 0 at beta = 1
  return 2.0 * sf::gamma_rec(1.0 - beta) * std::pow(t, -beta);
}

int branch_index(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw DomainError("k22: branch index defined for beta in (0, 1)");
  if (beta <= 0.5) return 1;  // phase locks to pi from below
  const auto& cfg = frh::config();

  // Certified list of denominator zeros: the angle can only cross a
  // half-turn boundary where E_{2b}(-t^{2b}/4) vanishes, so past the last
  // zero the branch is frozen. The zero count bounds |k| but transitions
  // need not share a direction; the unwrapped path settles the sign.
  sf::MLZeros zeros;
  bool certified = false;
  for (double x_max = 100.0; x_max <= cfg.zeros_xmax_cap; x_max *= 2.0) {
    zeros = sf::ml_zeros(2.0 * beta, x_max);
    if (zeros.complete) {
      certified = true;
      break;
    }
  }
  if (!certified)
    throw NonConvergence("k22: zero count of E_{2b}(-x) not certifiable");
  if (zeros.zeros.empty()) return 1;

  double t_last =
      std::pow(4.0 * zeros.zeros.back(), 1.0 / (2.0 * beta));
  double t_end = 1.5 * t_last + 10.0;
  int samples = 64 + 32 * static_cast<int>(zeros.zeros.size());
  std::vector<double> grid;
  for (int i = 0; i <= samples; ++i) grid.push_back(t_end * i / samples);
  return amplitude_phase(beta, grid).back().branch;
}

double asymp_phase(double beta, double t) {
  if (!(beta > 0.0 && beta < 1.0))
    throw DomainError("k22: asymptotic phase defined for beta in (0, 1)");
  if (beta == 0.5)
    return kPi - std::sqrt(kPi) * std::exp(-0.25 * t) * std::sqrt(t);
  int k = beta < 0.5 ? 1 : branch_index(beta);
  double coeff = 4.0 * sf::gamma(1.0 - beta) * sf::gamma_rec(1.0 - 2.0 * beta);
  return (2.0 * k - 1.0) * kPi - coeff * std::pow(t, -beta);
}

namespace {

bool amplitude_has_minimum(double beta, double t_max) {
  const auto& cfg = frh::config();
  double t = 0.2;
  double prev = amplitude_derivative(beta, t);
  while (t < t_max) {
    double step = t < 200.0 ? cfg.beta_c_scan_step : 5.0 * cfg.beta_c_scan_step;
    t = std::min(t + step, t_max);
    double d = amplitude_derivative(beta, t);
    if (prev < 0.0 && d > 0.0) return true;
    prev = d;
  }
  return false;
}

}  // namespace

double find_beta_c(double tol_beta, double t_max) {
  if (!(tol_beta >= 1e-4))
    throw DomainError("k22: beta_c tolerance below supported resolution");
  const auto& cfg = frh::config();
  double lo = cfg.beta_c_lo, hi = cfg.beta_c_hi;
  bool plo = amplitude_has_minimum(lo, t_max);
  bool phi = amplitude_has_minimum(hi, t_max);
  if (plo || !phi)
    throw PredicateNotBracketed(
        "k22: oscillation predicate constant on [0.5, 0.9]");
  while (hi - lo > tol_beta) {
    double mid = 0.5 * (lo + hi);
    (amplitude_has_minimum(mid, t_max) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double find_t_beta(double beta, double t_max) {
  validate_beta(beta);
  const auto& cfg = frh::config();
  double t = cfg.t_beta_scan_t0;
  double prev = amplitude_derivative(beta, t);
  while (t < t_max) {
    double t_next = t + cfg.t_beta_scan_step;
    double d = amplitude_derivative(beta, t_next);
    if (prev < 0.0 && d > 0.0) {
      sf::RootBracket br{t, t_next, prev, d};
      return sf::refine_root(
          [&](double s) { return amplitude_derivative(beta, s); }, br, 1e-6);
    }
    prev = d;
    t = t_next;
  }
  throw NoLocalMinimum("k22: no amplitude minimum up to t_max = " +
                       std::to_string(t_max));
}

std::vector<double> phase_critical_points(double beta, double t_max) {
  validate_beta(beta);
  const auto& cfg = frh::config();
  std::vector<double> roots;
  double t = cfg.t_beta_scan_t0;
  double prev = phase_derivative(beta, t);
  while (t < t_max) {
    double t_next = std::min(t + cfg.t_beta_scan_step, t_max);
    double d = phase_derivative(beta, t_next);
    if (prev * d < 0.0) {
      sf::RootBracket br{t, t_next, prev, d};
      roots.push_back(sf::refine_root(
          [&](double s) { return phase_derivative(beta, s); }, br,
          1e-3 * cfg.phase_crit_tol));
    }
    prev = d;
    t = t_next;
  }
  return roots;
}

}  // namespace frh::k22
