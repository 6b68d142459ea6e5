#include "frh/report.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>

#include "frh/config.hpp"
#include "frh/errors.hpp"
#include "frh/fkdv.hpp"
#include "frh/k22.hpp"
#include "frh/k33.hpp"
#include "frh/specfun.hpp"

namespace frh::report {

namespace sf = frh::specfun;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// reference values reproduced by the suite
const std::map<double, double> kFirstMinimumTable = {
    {0.80, 14.60},  {0.82, 27.56}, {0.84, 27.13}, {0.86, 27.23},
    {0.88, 39.83},  {0.90, 40.71}, {0.92, 65.28}, {0.94, 90.81},
    {0.96, 154.07}, {0.98, 356.19}};

const std::map<double, double> kRadiusTable = {{0.1, 10.0508},
                                               {0.3, 5.1655},
                                               {0.5, 5.6875},
                                               {0.7, 7.0081},
                                               {0.9, 10.2901}};

const std::vector<double> kPhaseCrit08 = {25.53, 31.21, 39.91, 48.24, 55.06};
const std::vector<double> kPhaseCrit06 = {13.87};

// divergence-ratio table: [pair 6..9][t index][beta index],
// t in {0.01,0.21,0.41,0.61,0.81}, beta in {0.2,0.4,0.6,0.8}
const double kRatioTable[4][5][4] = {
    {{34.98, 10.31, 2.76, 0.70},
     {64.31, 34.85, 17.12, 7.94},
     {73.51, 45.55, 25.58, 13.56},
     {79.59, 53.39, 32.47, 18.64},
     {84.24, 59.81, 38.49, 23.38}},
    {{53.42, 15.23, 3.92, 0.94},
     {98.21, 51.48, 24.38, 10.79},
     {112.27, 67.27, 36.42, 18.43},
     {121.55, 78.86, 46.22, 25.33},
     {128.64, 88.33, 54.79, 31.78}},
    {{94.71, 26.26, 6.57, 1.54},
     {174.12, 88.76, 40.85, 17.58},
     {199.04, 116.00, 61.03, 30.02},
     {215.51, 135.98, 77.46, 41.25},
     {228.08, 152.32, 91.83, 51.75}},
    {{127.74, 34.57, 8.44, 1.93},
     {234.84, 116.84, 52.45, 22.01},
     {268.46, 152.69, 78.36, 37.59},
     {290.66, 178.99, 99.45, 51.65},
     {307.62, 200.49, 117.90, 64.81}}};
const std::vector<double> kRatioTs = {0.01, 0.21, 0.41, 0.61, 0.81};
const std::vector<double> kRatioBetas = {0.2, 0.4, 0.6, 0.8};

struct Outcome {
  double computed = kNaN;
  bool pass = false;
  std::optional<double> reference;
};

class Runner {
 public:
  Runner(Suite suite, bool fast, std::vector<Entry>& out)
      : suite_(suite), fast_(fast), out_(out) {}

  bool fast() const { return fast_; }

  bool want(const std::string& module) const {
    switch (suite_) {
      case Suite::All: return true;
      case Suite::Specfun: return module == "specfun";
      case Suite::K22: return module == "k22";
      case Suite::K33: return module == "k33";
      case Suite::Fkdv: return module == "fkdv";
    }
    return true;
  }

  void add(const std::string& module, int criterion, const std::string& id,
           double tolerance, const std::function<Outcome()>& fn) {
    if (!want(module)) return;
    Entry e;
    e.id = id;
    e.criterion = criterion;
    e.module_tag = module;
    e.tolerance = tolerance;
    auto t0 = std::chrono::steady_clock::now();
    try {
      Outcome o = fn();
      e.computed = o.computed;
      e.pass = o.pass;
      e.reference = o.reference;
    } catch (const frh::Error&) {
      e.computed = kNaN;
      e.pass = false;
    }
    e.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    out_.push_back(std::move(e));
  }

 private:
  Suite suite_;
  bool fast_;
  std::vector<Entry>& out_;
};

bool within_rel(double computed, double reference, double rel) {
  return std::abs(computed - reference) <= rel * std::abs(reference);
}

// erfc oracle, independent of the Mittag-Leffler path: power series for
// small x, Lentz continued fraction beyond
double erfc_oracle(double x) {
  if (x < 0.0) return 2.0 - erfc_oracle(-x);
  if (x < 2.0) {
    double term = x, sum = x, x2 = x * x;
    for (int n = 1; n < 400; ++n) {
      term *= -x2 / n;
      double add = term / (2 * n + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return 1.0 - 2.0 / std::sqrt(kPi) * sum;
  }
  // erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  double f = 1e-30, c = f, d = 0.0;
  for (int n = 60; n >= 1; --n) {
    (void)n;
  }
  // modified Lentz on b_0 = x, a_k = k/2, b_k = x
  f = x;
  c = f;
  d = 0.0;
  for (int k = 1; k <= 80; ++k) {
    double a = 0.5 * k;
    d = x + a * d;
    if (d == 0.0) d = 1e-300;
    c = x + a / c;
    if (c == 0.0) c = 1e-300;
    d = 1.0 / d;
    double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-x * x) / std::sqrt(kPi) / f;
}

// --------------------------------------------------------------------------
// criterion 1 + specfun properties
// --------------------------------------------------------------------------
void specfun_checks(Runner& r) {
  double step = r.fast() ? 0.02 : 0.01;
  double tolscale = r.fast() ? 2.0 : 1.0;

  r.add("specfun", 1, "ml.identity-exp", 1e-12 * tolscale, [=] {
    double worst = 0.0;
    for (double x = -30.0; x <= 5.0 + 1e-12; x += step) {
      auto e = sf::detail::ml_series(1.0, 1.0, x);  // not the exact fast path
      double ref = std::exp(x);
      worst = std::max(worst, std::abs(e.value - ref) / std::max(1.0, ref));
    }
    return Outcome{worst, worst <= 1e-12 * tolscale, std::nullopt};
  });

  r.add("specfun", 1, "ml.identity-cos", 1e-10 * tolscale, [=] {
    double worst = 0.0;
    for (double z = 0.0; z <= 20.0 + 1e-12; z += step) {
      double v = sf::ml_eval({2.0, 1.0, -z * z}).value;
      worst = std::max(worst, std::abs(v - std::cos(z)));
    }
    return Outcome{worst, worst <= 1e-10 * tolscale, std::nullopt};
  });

  r.add("specfun", 13, "ml.identity-erfc", 1e-11 * tolscale, [=] {
    double worst = 0.0;
    for (double x = 0.0; x <= 5.0 + 1e-12; x += 0.05) {
      double ref = std::exp(x * x) * erfc_oracle(x);
      double v = sf::ml_eval({0.5, 1.0, -x}).value;
      worst = std::max(worst, std::abs(v - ref) / std::abs(ref));
    }
    return Outcome{worst, worst <= 1e-11 * tolscale, std::nullopt};
  });

  r.add("specfun", 13, "ml.zero-argument", 1e-13, [=] {
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
      for (int j = 1; j <= 10; ++j) {
        double a = 0.2 * i, b = 0.2 * j;
        double v = sf::ml_eval({a, b, 0.0}).value;
        worst = std::max(worst, std::abs(v - sf::gamma_rec(b)));
      }
    }
    return Outcome{worst, worst <= 1e-13, std::nullopt};
  });

  r.add("specfun", 13, "ml.complete-monotonicity", 0.0, [=] {
    for (double a : {0.25, 0.5, 0.75, 1.0}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double x = 0.0; x <= 50.0 + 1e-12; x += step) {
        double v = sf::ml_eval({a, 1.0, -x}).value;
        if (!(v > 0.0) || v > prev * (1.0 + 1e-13) + 1e-300)
          return Outcome{x, false, std::nullopt};
        prev = v;
      }
    }
    return Outcome{0.0, true, std::nullopt};
  });

  r.add("specfun", 13, "ml.strategy-consistency", 1.0, [=] {
    // wherever two strategies are admitted, they must agree within the max
    // of their reported error estimates
    double worst_ratio = 0.0;
    for (double a : {0.3, 0.6, 0.9, 1.2, 1.5, 1.8}) {
      for (double b : {1.0, 1.3}) {
        for (double X : {2.0, 5.0, 10.0, 20.0, 40.0, 80.0, 160.0, 320.0}) {
          double scale = std::max(std::abs(sf::gamma_rec(b - a)) / X, 1e-6);
          std::vector<sf::detail::Eval> evs;
          if (sf::detail::predict_series_abs_err(a, b, -X) < 1e-7 * scale)
            evs.push_back(sf::detail::ml_series(a, b, -X));
          if (sf::detail::predict_asym_abs_err(a, b, -X) < 1e-7 * scale)
            evs.push_back(sf::detail::ml_asym_full(a, b, -X));
          if (sf::detail::quadrature_admissible(a, b)) {
            auto q = sf::detail::ml_quadrature(a, b, -X, 1e-12);
            if (q.ok) evs.push_back(q);
          }
          for (size_t i = 0; i < evs.size(); ++i) {
            for (size_t j = i + 1; j < evs.size(); ++j) {
              double diff = std::abs(evs[i].value - evs[j].value);
              double bound = std::max(evs[i].est, evs[j].est) + 1e-14 * scale;
              worst_ratio = std::max(worst_ratio, diff / bound);
            }
          }
        }
      }
    }
    return Outcome{worst_ratio, worst_ratio <= 1.0, std::nullopt};
  });

  r.add("specfun", 13, "ml.zeros-cos", 1e-9, [=] {
    auto z = sf::ml_zeros(2.0, 100.0);
    if (z.zeros.size() != 3 || z.complete) return Outcome{kNaN, false};
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      double exact = std::pow((2 * k + 1) * kPi / 2.0, 2.0);
      worst = std::max(worst, std::abs(z.zeros[k] - exact));
    }
    return Outcome{worst, worst <= 1e-9, std::nullopt};
  });
}

// --------------------------------------------------------------------------
// K(2,2): criteria 2-6 + properties
// --------------------------------------------------------------------------
void k22_checks(Runner& r) {
  double tolscale = r.fast() ? 2.0 : 1.0;

  r.add("k22", 2, "k22.amplitude-halforder", 1e-8 * tolscale, [=] {
    int samples = r.fast() ? 200 : 400;
    double worst = 0.0;
    for (int i = 0; i <= samples; ++i) {
      double t = 40.0 * i / samples;
      double a2 = std::pow(k22::amplitude(0.5, t), 2.0);
      double fi = sf::erfi(0.5 * std::sqrt(t));
      double ref = std::exp(-0.5 * t) * (1.0 + fi * fi);
      worst = std::max(worst, std::abs(a2 - ref) / ref);
    }
    return Outcome{worst, worst <= 1e-8 * tolscale, std::nullopt};
  });

  r.add("k22", 3, "k22.beta-c", 0.005 * tolscale, [=] {
    double bc = k22::find_beta_c(r.fast() ? 2e-3 : 1e-3, 1000.0);
    return Outcome{bc, std::abs(bc - 0.672) <= 0.005 * tolscale, 0.672};
  });

  {
    std::vector<double> betas;
    for (const auto& [b, t] : kFirstMinimumTable) betas.push_back(b);
    if (r.fast()) betas = {0.80, 0.90, 0.98};
    for (double b : betas) {
      char id[64];
      std::snprintf(id, sizeof(id), "k22.first-minimum[%.2f]", b);
      r.add("k22", 4, id, 0.02 * tolscale, [=] {
        double ref = kFirstMinimumTable.at(b);
        double t = k22::find_t_beta(b, 500.0);
        return Outcome{t, within_rel(t, ref, 0.02 * tolscale), ref};
      });
    }
  }

  r.add("k22", 5, "k22.branch[0.8]", 0.0, [=] {
    int k = k22::branch_index(0.8);
    return Outcome{static_cast<double>(k), k == 3, 3.0};
  });
  r.add("k22", 5, "k22.branch[0.6]", 0.0, [=] {
    int k = k22::branch_index(0.6);
    return Outcome{static_cast<double>(k), k == 1, 1.0};
  });
  r.add("k22", 5, "k22.phase-critical[0.8]", 0.05, [=] {
    auto roots = k22::phase_critical_points(0.8, 60.0);
    if (roots.size() != kPhaseCrit08.size()) return Outcome{kNaN, false};
    double worst = 0.0;
    for (size_t i = 0; i < roots.size(); ++i)
      worst = std::max(worst, std::abs(roots[i] - kPhaseCrit08[i]));
    return Outcome{worst, worst <= 0.05, std::nullopt};
  });
  r.add("k22", 5, "k22.phase-critical[0.6]", 0.05, [=] {
    auto roots = k22::phase_critical_points(0.6, 60.0);
    if (roots.size() != kPhaseCrit06.size()) return Outcome{kNaN, false};
    double worst = std::abs(roots[0] - kPhaseCrit06[0]);
    return Outcome{worst, worst <= 0.05, std::nullopt};
  });

  for (double b : {0.3, 0.5, 0.7}) {
    char id[64];
    std::snprintf(id, sizeof(id), "k22.short-time-exponent[%.1f]", b);
    r.add("k22", 6, id, 0.02 * tolscale, [=] {
      // least-squares slope of log(1-A) against log t on [1e-4, 1e-2]
      int n = 20;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int i = 0; i < n; ++i) {
        double lt = std::log(1e-4) +
                    (std::log(1e-2) - std::log(1e-4)) * i / (n - 1);
        double t = std::exp(lt);
        double y = std::log(1.0 - k22::amplitude(b, t));
        sx += lt;
        sy += y;
        sxx += lt * lt;
        sxy += lt * y;
      }
      double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      return Outcome{slope, within_rel(slope, 2.0 * b, 0.02 * tolscale),
                     2.0 * b};
    });
    std::snprintf(id, sizeof(id), "k22.short-time-coefficient[%.1f]", b);
    r.add("k22", 6, id, 0.01 * tolscale, [=] {
      int n = 20;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int i = 0; i < n; ++i) {
        double lt = std::log(1e-4) +
                    (std::log(1e-2) - std::log(1e-4)) * i / (n - 1);
        double t = std::exp(lt);
        double y = std::log(1.0 - k22::amplitude(b, t));
        sx += lt;
        sy += y;
        sxx += lt * lt;
        sxy += lt * y;
      }
      double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      double intercept = (sy - slope * sx) / n;
      double cref = std::log(
          0.125 * (2.0 * sf::gamma_rec(1.0 + 2.0 * b) -
                   std::pow(sf::gamma_rec(1.0 + b), 2.0)));
      bool ok = std::abs(intercept - cref) <= 0.01 * tolscale * std::abs(cref);
      return Outcome{intercept, ok, cref};
    });
  }

  r.add("k22", 6, "k22.long-time-ratio[0.3]", 0.02, [=] {
    double t = 1e4;
    double lead = 2.0 * sf::gamma_rec(1.0 - 0.3) * std::pow(t, -0.3);
    double ratio = k22::amplitude(0.3, t) / lead;
    return Outcome{ratio, ratio >= 0.98 && ratio <= 1.02, 1.0};
  });

  // ---- properties (criterion 13) ----
  r.add("k22", 13, "k22.oracle-equivalence", 1e-11, [=] {
    double worst = 0.0;
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
      for (double c : {0.5, 1.0}) {
        k22::Params p(alpha, 0.7, c);
        auto orc = k22::oracle_iterate(p, 30);
        double gc = p.gamma_factor() * c;
        for (int n = 1; n <= 30; ++n) {
          double expect = ((n / 2) % 2 == 0 ? 1.0 : -1.0) * (2.0 * c / 3.0) *
                          std::pow(gc, n) * sf::gamma_rec(1.0 + 0.7 * n);
          double got = (n % 2 == 0) ? orc[n].cos_coeff(3)
                                    : orc[n].sin_coeff(3);
          worst = std::max(worst,
                           std::abs(got - expect) / std::abs(expect));
          // the dispersion operator must annihilate harmonics 0 and 1
          worst = std::max(worst, std::abs(orc[n].cos_coeff(0)) /
                                      std::abs(expect));
          worst = std::max(worst, std::abs(orc[n].cos_coeff(6)) /
                                      std::abs(expect));
        }
      }
    }
    return Outcome{worst, worst <= 1e-11, std::nullopt};
  });

  r.add("k22", 13, "k22.partial-sum-bound", 0.0, [=] {
    k22::Params p(2.0, 0.6, 1.0);
    for (double t : {0.5, 2.0, 5.0}) {
      for (double x : {0.0, 1.0, 2.5}) {
        double full = k22::solution(p, x, t, 1e-12);
        for (int N : {10, 14}) {
          double s = 0.0;
          for (int n = 0; n <= N; ++n) s += k22::coefficient(n, p, x, t);
          double bound =
              2.0 * std::abs(k22::coefficient(N + 1, p, x, t)) + 1e-13;
          if (std::abs(s - full) > bound)
            return Outcome{std::abs(s - full), false, std::nullopt};
        }
      }
    }
    return Outcome{0.0, true, std::nullopt};
  });

  r.add("k22", 13, "k22.periodicity-and-mean", 1e-10, [=] {
    k22::Params p(1.5, 0.8, 1.0);
    double worst = 0.0;
    for (double t : {0.0, 1.0, 10.0}) {
      for (double x : {-3.0, 0.7, 5.2}) {
        worst = std::max(worst,
                         std::abs(k22::solution(p, x + 4.0 * kPi, t) -
                                  k22::solution(p, x, t)));
      }
      int n = 512;
      double mean = 0.0;
      for (int i = 0; i < n; ++i)
        mean += k22::solution(p, -2.0 * kPi + 4.0 * kPi * i / n, t);
      mean /= n;
      worst = std::max(worst, std::abs(mean - 2.0 / 3.0));
    }
    return Outcome{worst, worst <= 1e-10, std::nullopt};
  });

  r.add("k22", 13, "k22.amplitude-range", 0.0, [=] {
    for (double b : {0.2, 0.4, 0.6, 0.8, 1.0}) {
      for (double t = 0.0; t <= 50.0; t += 0.5) {
        double a = k22::amplitude(b, t);
        if (!(a >= -1e-12 && a <= 1.0 + 1e-10))
          return Outcome{a, false, std::nullopt};
      }
    }
    return Outcome{1.0, true, std::nullopt};
  });

  r.add("k22", 13, "k22.monotone-phase-low-order", 0.0, [=] {
    std::vector<double> grid;
    for (double t = 0.0; t <= 60.0; t += 0.25) grid.push_back(t);
    for (double b : {0.25, 0.5}) {
      auto path = k22::amplitude_phase(b, grid);
      for (size_t i = 1; i < path.size(); ++i) {
        if (path[i].phase < path[i - 1].phase - 1e-9)
          return Outcome{path[i].t, false, std::nullopt};
      }
    }
    return Outcome{0.0, true, std::nullopt};
  });
}

// --------------------------------------------------------------------------
// K(3,3): criteria 7-9 + properties
// --------------------------------------------------------------------------
void k33_checks(Runner& r) {
  double tolscale = r.fast() ? 2.0 : 1.0;

  r.add("k33", 7, "k33.coefficients-classical", 1e-8, [=] {
    auto seq = k33::c_sequence(1.0, 60);
    double worst = 0.0;
    for (int n = 0; n <= 60; ++n)
      worst = std::max(worst, std::abs(seq.c(n) - 1.0));
    return Outcome{worst, worst <= 1e-8, 1.0};
  });

  for (double b : {0.25, 0.5, 0.75}) {
    char id[64];
    std::snprintf(id, sizeof(id), "k33.c3-closed-form[%.2f]", b);
    r.add("k33", 7, id, 1e-12, [=] {
      auto seq = k33::c_sequence(b, 10);
      double ref = 3.0 - sf::gamma(1.0 + 2.0 * b) /
                             std::pow(sf::gamma(1.0 + b), 2.0);
      double got = seq.c(3);
      return Outcome{got, within_rel(got, ref, 1e-12), ref};
    });
  }

  r.add("k33", 7, "k33.recurrence-vs-oracle", 1e-10, [=] {
    double worst = 0.0;
    for (double b : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      auto seq = k33::c_sequence(b, 40);  // throws OracleMismatch beyond tol
      auto orc = k33::oracle_iterate(b, 40);
      for (int n = 0; n <= 40; ++n) {
        bool even = n % 2 == 0;
        double coeff = even ? orc[n].poly.cos_coeff(2)
                            : orc[n].poly.sin_coeff(2);
        double log_c_orc = std::log(std::abs(coeff)) + orc[n].log_scale +
                           0.5 * std::log(2.0) +
                           (n - 0.5) * std::log(3.0) +
                           sf::log_abs_gamma(1.0 + b * n);
        worst = std::max(
            worst, std::abs(std::expm1(log_c_orc - seq.log_abs_c(n))));
      }
    }
    return Outcome{worst, worst <= 1e-10, std::nullopt};
  });

  {
    int n_max = r.fast() ? 200 : 400;
    for (const auto& [b, ref] : kRadiusTable) {
      char id[64];
      std::snprintf(id, sizeof(id), "k33.radius[%.1f]", b);
      r.add("k33", 8, id, 0.02 * tolscale, [=] {
        auto gr = k33::gamma_radius(k33::c_sequence(b, n_max));
        return Outcome{gr.radius, within_rel(gr.radius, ref, 0.02 * tolscale),
                       ref};
      });
    }
  }

  r.add("k33", 9, "k33.finite-before-radius", 0.0, [=] {
    k33::Series s(0.3, 400);
    auto e = s.eval(1.0, 4.5);
    bool ok = std::isfinite(e.u) && std::abs(e.u) < 100.0 &&
              std::isfinite(e.amplitude);
    return Outcome{e.amplitude, ok, std::nullopt};
  });
  r.add("k33", 9, "k33.radius-guard", 0.0, [=] {
    k33::Series s(0.3, 400);
    try {
      s.eval(0.0, 5.0);
      return Outcome{kNaN, false, std::nullopt};
    } catch (const OutsideRadius& e) {
      return Outcome{e.radius(), true, std::nullopt};
    }
  });
  r.add("k33", 9, "k33.partial-sum-blowup", 0.0, [=] {
    k33::Series s(0.3, 400);
    double sup = s.partial_sum_amplitude(400, 5.5);
    return Outcome{sup, sup > 1e3, 1e4};
  });

  r.add("k33", 13, "k33.parity-support", 1e-13, [=] {
    double worst = 0.0;
    for (double b : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      auto orc = k33::oracle_iterate(b, 60);
      for (int n = 0; n <= 60; ++n) {
        if (!orc[n].poly.supported_only_on(2))
          return Outcome{static_cast<double>(n), false, std::nullopt};
        double main = std::max(std::abs(orc[n].poly.cos_coeff(2)),
                               std::abs(orc[n].poly.sin_coeff(2)));
        double off = (n % 2 == 0) ? std::abs(orc[n].poly.sin_coeff(2))
                                  : std::abs(orc[n].poly.cos_coeff(2));
        worst = std::max(worst, off / main);
      }
    }
    return Outcome{worst, worst <= 1e-13, std::nullopt};
  });

  r.add("k33", 13, "k33.radius-curve-shape", 0.0, [=] {
    int n_max = r.fast() ? 200 : 400;
    auto rad = [&](double b) {
      return k33::gamma_radius(k33::c_sequence(b, n_max)).radius;
    };
    bool ok = rad(0.1) > rad(0.3) && rad(0.9) > rad(0.5);
    return Outcome{ok ? 1.0 : 0.0, ok, std::nullopt};
  });
}

// --------------------------------------------------------------------------
// fKdV: criteria 10-12 + properties
// --------------------------------------------------------------------------
void fkdv_checks(Runner& r) {
  double tolscale = r.fast() ? 2.0 : 1.0;
  fkdv::Grid grid;
  if (r.fast()) grid.points = 4096;

  for (double b : {0.2, 0.8}) {
    char id[64];
    std::snprintf(id, sizeof(id), "fkdv.closed-forms[%.1f]", b);
    r.add("fkdv", 10, id, 1e-6, [=] {
      fkdv::Series s(grid, b, 3);
      auto xs = grid.coords();
      double worst = 0.0;
      for (int i = 0; i < grid.points; ++i) {
        double u1, u2, u3;
        fkdv::closed_u123(b, xs[i], 1.0, &u1, &u2, &u3);
        worst = std::max(worst, std::abs(s.g(1)[i] - u1));
        worst = std::max(worst, std::abs(s.g(2)[i] - u2));
        worst = std::max(worst, std::abs(s.g(3)[i] - u3));
      }
      return Outcome{worst, worst <= 1e-6, std::nullopt};
    });
  }

  r.add("fkdv", 11, "fkdv.ratio-table", 0.02 * tolscale, [=] {
    const struct {
      double beta, t;
      int pair;
      double ref;
    } spots[] = {{0.2, 0.01, 6, 34.98}, {0.8, 0.01, 6, 0.70},
                 {0.4, 0.41, 7, 67.27}, {0.6, 0.61, 8, 77.46},
                 {0.2, 0.81, 9, 307.62}, {0.8, 0.81, 9, 64.81}};
    double worst = 0.0;
    std::map<double, fkdv::Series> series;
    for (double b : kRatioBetas) series.emplace(b, fkdv::Series(grid, b, 9));
    for (const auto& sp : spots) {
      double got = series.at(sp.beta).ratio(sp.pair, sp.t);
      worst = std::max(worst, std::abs(got / sp.ref - 1.0));
    }
    return Outcome{worst, worst <= 0.02 * tolscale, std::nullopt};
  });

  r.add("fkdv", 11, "fkdv.ratio-structure", 0.0, [=] {
    std::map<double, fkdv::Series> series;
    for (double b : kRatioBetas) series.emplace(b, fkdv::Series(grid, b, 9));
    for (int p = 6; p <= 9; ++p) {
      for (double b : kRatioBetas) {
        double prev = -1.0;
        for (double t : kRatioTs) {
          double v = series.at(b).ratio(p, t);
          if (v <= prev) return Outcome{v, false, std::nullopt};
          prev = v;
        }
      }
      for (double t : kRatioTs) {
        double prev = std::numeric_limits<double>::infinity();
        for (double b : kRatioBetas) {
          double v = series.at(b).ratio(p, t);
          if (v >= prev) return Outcome{v, false, std::nullopt};
          prev = v;
        }
      }
    }
    return Outcome{1.0, true, std::nullopt};
  });

  r.add("fkdv", 11, "fkdv.table-agreement", 0.02 * tolscale, [=] {
    // every published cell within tolerance
    std::map<double, fkdv::Series> series;
    for (double b : kRatioBetas) series.emplace(b, fkdv::Series(grid, b, 9));
    double worst = 0.0;
    for (int p = 0; p < 4; ++p) {
      for (size_t it = 0; it < kRatioTs.size(); ++it) {
        for (size_t ib = 0; ib < kRatioBetas.size(); ++ib) {
          double got =
              series.at(kRatioBetas[ib]).ratio(p + 6, kRatioTs[it]);
          worst =
              std::max(worst, std::abs(got / kRatioTable[p][it][ib] - 1.0));
        }
      }
    }
    return Outcome{worst, worst <= 0.02 * tolscale, std::nullopt};
  });

  r.add("fkdv", 12, "fkdv.soliton-resummation", 1e-6, [=] {
    double err = fkdv::resum_beta1_sup_error(grid, 20, 0.5);
    return Outcome{err, err <= 1e-6, std::nullopt};
  });

  r.add("k22", 12, "k22.classical-wave", 1e-10, [=] {
    k22::Params p(2.0, 1.0, 1.0);
    double worst = 0.0;
    for (double x : {0.0, 1.0, 2.0}) {
      for (double t : {0.0, 1.0, 5.0}) {
        double ref = 4.0 / 3.0 * std::pow(std::cos(0.25 * (x - t)), 2.0);
        worst = std::max(worst, std::abs(k22::solution(p, x, t) - ref));
      }
    }
    return Outcome{worst, worst <= 1e-10, std::nullopt};
  });

  r.add("k33", 12, "k33.classical-wave", 1e-8, [=] {
    k33::Series s(1.0, 60);
    double worst = 0.0;
    for (double t : {0.25, 0.5, 1.0}) {
      double ec, es;
      s.partial_sum_components(25, t, &ec, &es);
      double dc = ec - std::sqrt(1.5) * std::cos(t / 3.0);
      double ds = es - std::sqrt(1.5) * std::sin(t / 3.0);
      worst = std::max(worst, std::hypot(dc, ds));
    }
    return Outcome{worst, worst <= 1e-8, std::nullopt};
  });

  r.add("fkdv", 13, "fkdv.spectral-derivative", 1e-10, [=] {
    auto xs = grid.coords();
    std::vector<double> g0(grid.points);
    for (int i = 0; i < grid.points; ++i) {
      double s = 1.0 / std::cosh(0.5 * xs[i]);
      g0[i] = 3.0 * s * s;
    }
    auto d = fkdv::spectral_derivative(grid, g0, 1);
    double worst = 0.0;
    for (int i = 0; i < grid.points; ++i) {
      double s = 1.0 / std::cosh(0.5 * xs[i]);
      double ref = -3.0 * s * s * std::tanh(0.5 * xs[i]);
      worst = std::max(worst, std::abs(d[i] - ref));
    }
    return Outcome{worst, worst <= 1e-10, std::nullopt};
  });

  r.add("fkdv", 13, "fkdv.parity-zero-mean", 1e-9, [=] {
    fkdv::Series s(grid, 0.5, 9);
    double worst = 0.0;
    for (int n = 0; n <= 9; ++n) {
      const auto& g = s.g(n);
      double sup = s.sup_g(n);
      double parity = (n % 2 == 0) ? 1.0 : -1.0;
      for (int i = 1; i < grid.points; ++i) {
        double v = g[i] - parity * g[grid.points - i];
        worst = std::max(worst, std::abs(v) / sup);
      }
      if (n >= 1) {
        double mean = 0.0;
        for (double v : g) mean += v;
        mean /= grid.points;
        worst = std::max(worst, std::abs(mean) / sup);
      }
    }
    return Outcome{worst, worst <= 1e-9, std::nullopt};
  });

  r.add("fkdv", 13, "fkdv.grid-independence", 1e-3, [=] {
    fkdv::Series base(grid, 0.4, 7);
    fkdv::Grid fine = grid;
    fine.points = grid.points * 2;
    fkdv::Series denser(fine, 0.4, 7);
    fkdv::Grid wide = grid;
    wide.half_length = grid.half_length * 2.0;
    wide.points = grid.points * 2;  // keep the spacing
    fkdv::Series wider(wide, 0.4, 7);
    double r0 = base.ratio(7, 0.41);
    double worst = std::max(std::abs(denser.ratio(7, 0.41) / r0 - 1.0),
                            std::abs(wider.ratio(7, 0.41) / r0 - 1.0));
    return Outcome{worst, worst <= 1e-3, std::nullopt};
  });

  r.add("fkdv", 13, "fkdv.ratio-time-scaling", 1e-13, [=] {
    fkdv::Series s(grid, 0.6, 8);
    double a = s.ratio(8, 0.3) / std::pow(0.3, 0.6);
    double b = s.ratio(8, 0.7) / std::pow(0.7, 0.6);
    double worst = std::abs(a / b - 1.0);
    return Outcome{worst, worst <= 1e-13, std::nullopt};
  });

  r.add("fkdv", 13, "fkdv.divergence-monotone", 0.0, [=] {
    auto rep = fkdv::divergence_report(0.2, kRatioTs, 9, grid);
    for (const auto& row : rep.rows)
      if (!row.monotone_increasing) return Outcome{row.t, false, std::nullopt};
    bool ok = rep.partial_sum_sup_t1 >= 1e7;
    return Outcome{rep.partial_sum_sup_t1, ok, 1e8};
  });
}

}  // namespace

Suite suite_from_name(const std::string& name) {
  if (name == "all") return Suite::All;
  if (name == "specfun") return Suite::Specfun;
  if (name == "k22") return Suite::K22;
  if (name == "k33") return Suite::K33;
  if (name == "fkdv") return Suite::Fkdv;
  throw DomainError("unknown suite: " + name);
}

std::vector<Entry> run(Suite suite, bool fast) {
  std::vector<Entry> out;
  Runner r(suite, fast, out);
  specfun_checks(r);
  k22_checks(r);
  k33_checks(r);
  fkdv_checks(r);
  return out;
}

bool print_criterion_summary(const std::vector<Entry>& entries,
                             std::ostream& os) {
  static const std::map<int, const char*> names = {
      {1, "Mittag-Leffler identities"},
      {2, "half-order amplitude closed form"},
      {3, "amplitude bifurcation threshold"},
      {4, "first-local-minimum times"},
      {5, "phase branches and critical points"},
      {6, "short/long-time amplitude asymptotics"},
      {7, "cubic coefficient sequence"},
      {8, "convergence radii"},
      {9, "finite-time breakdown regime"},
      {10, "grid vs closed-form iterates"},
      {11, "divergence ratio table"},
      {12, "classical-limit resummations"},
      {13, "module property suite"}};
  std::map<int, std::pair<int, int>> tally;  // criterion -> {pass, total}
  for (const auto& e : entries) {
    auto& t = tally[e.criterion];
    t.second += 1;
    if (e.pass) t.first += 1;
  }
  bool all_ok = true;
  for (const auto& [crit, t] : tally) {
    bool ok = t.first == t.second;
    all_ok = all_ok && ok;
    auto it = names.find(crit);
    os << (ok ? "PASS" : "FAIL") << " criterion " << crit << ": "
       << (it != names.end() ? it->second : "?") << " (" << t.first << "/"
       << t.second << " checks)\n";
  }
  return all_ok;
}

}  // namespace frh::report
