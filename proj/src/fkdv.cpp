#include "frh/fkdv.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "frh/config.hpp"
#include "frh/specfun.hpp"

namespace frh::fkdv {

namespace sf = frh::specfun;

namespace {

constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// in-place iterative radix-2 FFT; sign = -1 forward, +1 inverse (no scaling)
void fft(std::vector<cplx>& a, int sign) {
  int n = static_cast<int>(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * kPi / len;
    cplx wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cplx w(1.0);
      for (int k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<cplx> to_spectrum(const std::vector<double>& g) {
  std::vector<cplx> a(g.begin(), g.end());
  fft(a, -1);
  return a;
}

std::vector<double> from_spectrum(std::vector<cplx> a) {
  int n = static_cast<int>(a.size());
  fft(a, +1);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a[i].real() / n;
  return g;
}

// signed mode index for slot m of an n-point transform
int mode_of(int m, int n) { return m < n / 2 ? m : m - n; }

// spectral d^order/dx^order; Nyquist zeroed for odd orders
std::vector<cplx> derivative_spectrum(const std::vector<cplx>& a, double L,
                                      int order) {
  int n = static_cast<int>(a.size());
  std::vector<cplx> out(n);
  for (int m = 0; m < n; ++m) {
    int md = mode_of(m, n);
    if (order % 2 == 1 && md == -n / 2) {
      out[m] = 0.0;
      continue;
    }
    cplx ik(0.0, kPi * md / L);
    cplx f = 1.0;
    for (int j = 0; j < order; ++j) f *= ik;
    out[m] = a[m] * f;
  }
  return out;
}

// physical values on the doubled (dealiasing) grid
std::vector<double> refine_to_fine(const std::vector<cplx>& spec) {
  int n = static_cast<int>(spec.size());
  std::vector<cplx> big(2 * n, cplx(0.0));
  for (int m = 0; m < n; ++m) {
    int md = mode_of(m, n);
    big[md >= 0 ? md : 2 * n + md] = spec[m] * 2.0;
  }
  return from_spectrum(std::move(big));
}

// truncate a fine-grid function back to the coarse spectrum
std::vector<cplx> coarsen_spectrum(const std::vector<double>& fine) {
  auto big = to_spectrum(fine);
  int n = static_cast<int>(big.size()) / 2;
  std::vector<cplx> out(n);
  for (int m = 0; m < n; ++m) {
    int md = mode_of(m, n);
    out[m] = big[md >= 0 ? md : 2 * n + md] * 0.5;
  }
  return out;
}

// The iterates are analytic in the strip |Im x| < pi, so genuine spectral
// content of every u_n decays like e^{-pi |k|} (times a polynomial); beyond
// a fixed wavenumber the modes are pure round-off that the third derivative
// would re-amplify by k^3 each step. Zero everything above the band the
// final iterate can populate.
void truncate_band(std::vector<cplx>& spec, double L, double k_cut) {
  int n = static_cast<int>(spec.size());
  for (int m = 0; m < n; ++m) {
    double k = kPi * std::abs(mode_of(m, n)) / L;
    if (k > k_cut) spec[m] = 0.0;
  }
}

double top_third_energy_fraction(const std::vector<cplx>& spec) {
  int n = static_cast<int>(spec.size());
  double total = 0.0, top = 0.0;
  for (int m = 0; m < n; ++m) {
    int md = std::abs(mode_of(m, n));
    double e = std::norm(spec[m]);
    total += e;
    if (md >= n / 3) top += e;
  }
  return total > 0.0 ? top / total : 0.0;
}

}  // namespace

std::vector<double> Grid::coords() const {
  std::vector<double> x(points);
  for (int i = 0; i < points; ++i) x[i] = -half_length + i * dx();
  return x;
}

namespace {

// Exact representation of the iterates: every u_n is P(s) + tau Q(s) with
// s = sech^2(x/2), tau = tanh(x/2), tau^2 = 1 - s. The algebra is closed
// under products and d/dx, so the recurrence runs on small coefficient
// vectors instead of grid samples. (A Fourier-spectral iteration is
// unstable here: the trial function satisfies u0'' + u0^2/2 = u0, so the
// two rhs terms cancel to k^2 below their own size at high wavenumbers,
// and d^3/dx^3 re-amplifies any floor noise by k^3 every step.)
struct HypPoly {
  std::vector<double> p;  // coefficients of s^a
  std::vector<double> q;  // coefficients of tau s^a

  static void acc(std::vector<double>& v, size_t i, double c) {
    if (v.size() <= i) v.resize(i + 1, 0.0);
    v[i] += c;
  }

  HypPoly operator*(const HypPoly& o) const {
    HypPoly r;
    for (size_t i = 0; i < p.size(); ++i)
      for (size_t j = 0; j < o.p.size(); ++j)
        acc(r.p, i + j, p[i] * o.p[j]);
    // tau^2 Q1 Q2 = (1 - s) Q1 Q2
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < o.q.size(); ++j) {
        acc(r.p, i + j, q[i] * o.q[j]);
        acc(r.p, i + j + 1, -q[i] * o.q[j]);
      }
    for (size_t i = 0; i < p.size(); ++i)
      for (size_t j = 0; j < o.q.size(); ++j)
        acc(r.q, i + j, p[i] * o.q[j]);
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < o.p.size(); ++j)
        acc(r.q, i + j, q[i] * o.p[j]);
    return r;
  }

  HypPoly& operator+=(const HypPoly& o) {
    for (size_t i = 0; i < o.p.size(); ++i) acc(p, i, o.p[i]);
    for (size_t i = 0; i < o.q.size(); ++i) acc(q, i, o.q[i]);
    return *this;
  }

  HypPoly& operator*=(double c) {
    for (auto& v : p) v *= c;
    for (auto& v : q) v *= c;
    return *this;
  }

  // d/dx: s' = -s tau, tau' = s/2:
  //   d(s^a)      = -a tau s^a
  //   d(tau s^a)  = -a s^a + (a + 1/2) s^{a+1}
  HypPoly derivative() const {
    HypPoly r;
    for (size_t a = 0; a < p.size(); ++a)
      if (a > 0) acc(r.q, a, -static_cast<double>(a) * p[a]);
    for (size_t a = 0; a < q.size(); ++a) {
      if (a > 0) acc(r.p, a, -static_cast<double>(a) * q[a]);
      acc(r.p, a + 1, (a + 0.5) * q[a]);
    }
    return r;
  }

  // exact polynomial cancellations leave eps-size residue at high degree;
  // dropping it keeps the degree at its analytic value
  void trim() {
    double m = 0.0;
    for (double v : p) m = std::max(m, std::abs(v));
    for (double v : q) m = std::max(m, std::abs(v));
    double cut = 1e-13 * m;
    for (auto& v : p)
      if (std::abs(v) < cut) v = 0.0;
    for (auto& v : q)
      if (std::abs(v) < cut) v = 0.0;
    while (!p.empty() && p.back() == 0.0) p.pop_back();
    while (!q.empty() && q.back() == 0.0) q.pop_back();
  }

  double eval(double s, double tau) const {
    double vp = 0.0;
    for (size_t i = p.size(); i-- > 0;) vp = vp * s + p[i];
    double vq = 0.0;
    for (size_t i = q.size(); i-- > 0;) vq = vq * s + q[i];
    return vp + tau * vq;
  }
};

}  // namespace

Series::Series(const Grid& grid, double beta, int n_terms)
    : grid_(grid), beta_(beta) {
  const auto& cfg = frh::config();
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError("fkdv: beta must lie in (0, 1]");
  if (n_terms < 0 || n_terms > 12)
    throw DomainError("fkdv: iteration supports up to 12 terms");
  if (!is_pow2(grid.points))
    throw DomainError("fkdv: grid size must be a power of two");

  std::vector<HypPoly> u;
  {
    HypPoly u0;
    u0.p = {0.0, 3.0};  // 3 sech^2(x/2)
    u.push_back(u0);
  }
  for (int n = 0; n < n_terms; ++n) {
    HypPoly w;
    for (int k = 0; k <= n; ++k) w += u[k] * u[n - k];
    HypPoly rhs = u[n].derivative().derivative().derivative();
    HypPoly dw = w.derivative();
    dw *= 0.5;
    rhs += dw;
    rhs *= -sf::gamma(1.0 + beta_ * n) / sf::gamma(1.0 + beta_ * (n + 1));
    rhs.trim();
    u.push_back(rhs);
  }

  // grid views of the exact iterates
  auto xs = grid_.coords();
  std::vector<double> sv(grid_.points), tv(grid_.points);
  for (int i = 0; i < grid_.points; ++i) {
    double sh = 1.0 / std::cosh(0.5 * xs[i]);
    sv[i] = sh * sh;
    tv[i] = std::tanh(0.5 * xs[i]);
  }
  if (3.0 * sv.front() > cfg.fkdv_boundary_decay)
    throw DomainError("fkdv: trial function does not decay at the box edge");

  for (int n = 0; n <= n_terms; ++n) {
    std::vector<double> g(grid_.points);
    for (int i = 0; i < grid_.points; ++i) g[i] = u[n].eval(sv[i], tv[i]);
    g_.push_back(std::move(g));
  }

  // the product spectra must stay clear of the dealiasing band
  for (int n = 0; n < n_terms && n <= 1; ++n) {
    std::vector<double> w(grid_.points, 0.0);
    for (int k = 0; k <= n; ++k)
      for (int i = 0; i < grid_.points; ++i) w[i] += g_[k][i] * g_[n - k][i];
    auto spec = to_spectrum(w);
    double frac = top_third_energy_fraction(spec);
    if (frac > cfg.fkdv_alias_energy)
      warnings_.push_back("aliasing: top-third energy fraction " +
                          std::to_string(frac) + " at n = " +
                          std::to_string(n));
  }

  for (const auto& gn : g_) {
    double m = 0.0;
    for (double v : gn) m = std::max(m, std::abs(v));
    sup_.push_back(m);
  }
}

const std::vector<double>& Series::g(int n) const {
  if (n < 0 || n >= static_cast<int>(g_.size()))
    throw DomainError("fkdv: iterate index out of range");
  return g_[n];
}

double Series::sup_g(int n) const {
  if (n < 0 || n >= static_cast<int>(sup_.size()))
    throw DomainError("fkdv: iterate index out of range");
  return sup_[n];
}

double Series::ratio(int n_hi, double t) const {
  if (n_hi < 1 || n_hi >= static_cast<int>(g_.size()))
    throw DomainError("fkdv: ratio pair outside the built series");
  return std::pow(t, beta_) * sup_[n_hi] / sup_[n_hi - 1];
}

std::vector<double> Series::partial_sum(int n_terms, double t) const {
  if (n_terms < 0 || n_terms >= static_cast<int>(g_.size()))
    throw DomainError("fkdv: partial sum index outside the built series");
  std::vector<double> acc(grid_.points, 0.0);
  for (int n = 0; n <= n_terms; ++n) {
    double f = std::pow(t, beta_ * n);
    if (t == 0.0) f = (n == 0) ? 1.0 : 0.0;
    for (int i = 0; i < grid_.points; ++i) acc[i] += f * g_[n][i];
  }
  return acc;
}

double Series::partial_sum_sup(int n_terms, double t) const {
  auto s = partial_sum(n_terms, t);
  double m = 0.0;
  for (double v : s) m = std::max(m, std::abs(v));
  return m;
}

Series iterate(const Grid& grid, double beta, int n_terms) {
  return Series(grid, beta, n_terms);
}

std::vector<double> spectral_derivative(const Grid& grid,
                                        const std::vector<double>& g,
                                        int order) {
  if (!is_pow2(grid.points) ||
      static_cast<int>(g.size()) != grid.points)
    throw DomainError("fkdv: derivative input does not match the grid");
  return from_spectrum(
      derivative_spectrum(to_spectrum(g), grid.half_length, order));
}

std::vector<RatioCell> ratio_table(const std::vector<double>& betas,
                                   const std::vector<double>& ts,
                                   const std::vector<int>& pair_his,
                                   const Grid& grid) {
  int n_need = pair_his.empty()
                   ? 0
                   : *std::max_element(pair_his.begin(), pair_his.end());
  std::vector<RatioCell> out;
  for (double b : betas) {
    Series s(grid, b, n_need);
    for (double t : ts) {
      for (int p : pair_his) out.push_back({b, t, p, s.ratio(p, t)});
    }
  }
  return out;
}

void closed_u123(double beta, double x, double t, double* u1, double* u2,
                 double* u3) {
  double th = std::tanh(0.5 * x);
  double sech = 1.0 / std::cosh(0.5 * x);
  double s2 = sech * sech;
  double ch = std::cosh(x);
  double ch2 = std::cosh(2.0 * x);
  double g1 = sf::gamma(1.0 + beta);
  double g2 = sf::gamma(1.0 + 2.0 * beta);
  double g3 = sf::gamma(1.0 + 3.0 * beta);
  // u_1 in the form without the removable singularity at x = 0
  if (u1) *u1 = 3.0 * std::pow(t, beta) * th * s2 / g1;
  if (u2) *u2 = 1.5 * std::pow(t, 2.0 * beta) * (-2.0 + ch) * s2 * s2 / g2;
  if (u3) {
    double bracket = (39.0 - 32.0 * ch + ch2) * g1 * g1 +
                     12.0 * (-2.0 + ch) * g2;
    *u3 = 3.0 * std::pow(t, 3.0 * beta) * bracket * s2 * s2 * s2 * th /
          (8.0 * g1 * g1 * g3);
  }
}

double resum_beta1_sup_error(const Grid& grid, int n_terms, double t) {
  Series s(grid, 1.0, n_terms);
  auto sum = s.partial_sum(n_terms, t);
  auto xs = grid.coords();
  double worst = 0.0;
  for (int i = 0; i < grid.points; ++i) {
    double sech = 1.0 / std::cosh(0.5 * (xs[i] - t));
    worst = std::max(worst, std::abs(sum[i] - 3.0 * sech * sech));
  }
  return worst;
}

DivergenceReport divergence_report(double beta, const std::vector<double>& ts,
                                   int n_max, const Grid& grid) {
  if (!(beta > 0.0 && beta < 1.0))
    throw DomainError("fkdv: divergence study requires beta in (0, 1)");
  DivergenceReport rep;
  rep.beta = beta;
  Series s(grid, beta, n_max);
  for (int p = 6; p <= std::min(9, n_max); ++p) rep.pair_his.push_back(p);
  for (double t : ts) {
    DivergenceRow row;
    row.t = t;
    for (int p : rep.pair_his) row.ratios.push_back(s.ratio(p, t));
    row.monotone_increasing =
        std::is_sorted(row.ratios.begin(), row.ratios.end()) &&
        std::adjacent_find(row.ratios.begin(), row.ratios.end()) ==
            row.ratios.end();
    rep.rows.push_back(std::move(row));
  }
  rep.partial_sum_sup_t1 = s.partial_sum_sup(std::min(9, n_max), 1.0);
  return rep;
}

}  // namespace frh::fkdv
