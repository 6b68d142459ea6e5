#pragma once

#include <cstdint>
#include <vector>

#include "frh/errors.hpp"
#include "frh/trigpoly.hpp"

namespace frh::k33 {

// Direct functional iteration of the cubic recurrence in the exact trig
// algebra on harmonic 1/3 (the dispersion operator annihilates harmonic 1),
// starting from u_0 = sqrt(3/2) cos(x/3). Entry n is the spatial part of
// u_n, the coefficient of t^{beta n}, in scaled (poly, log-magnitude) form.
std::vector<ScaledTrigPoly> oracle_iterate(double beta, int n_max);

// Scaled coefficient sequence e_n = c_n / (Gamma(1+beta n) 3^n) computed by
// the closed recurrence, held as (sign, log-magnitude); gamma_n is the
// root-test sequence (c_n / Gamma(1+beta n))^{1/n}.
struct CoeffSeq {
  double beta = 1.0;
  int n_max = 0;
  std::vector<int> sign_e;      // -1, 0, +1
  std::vector<double> log_e;    // log |e_n|; -inf when sign is 0
  std::vector<double> gamma_n;  // gamma_n for n >= 1 (index 0 unused)

  // c_n reconstructed from the scaled form; +-inf once Gamma overflows.
  double c(int n) const;
  double log_abs_c(int n) const;
};

// Builds the sequence and cross-validates it against oracle_iterate for
// n <= min(n_max, 40); throws OracleMismatch on disagreement.
CoeffSeq c_sequence(double beta, int n_max);

struct GammaRadius {
  double gamma_est = 0.0;
  double radius = 0.0;
};

// Tail-extrapolated limit of gamma_n (last 20% of indices with an n^{-1}
// correction) and the root-test radius R = (3/gamma)^{1/beta}.
// Throws NotConverged when the tail has not settled.
GammaRadius gamma_radius(const CoeffSeq& seq);

// Resummed time series E_c, E_s with a divergence guard at the estimated
// radius of convergence.
class Series {
 public:
  explicit Series(double beta, int n_max = 400);

  double radius() const { return radius_; }         // +inf when entire
  double margin() const { return margin_; }
  const CoeffSeq& coefficients() const { return seq_; }

  struct Eval {
    double u = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;  // continuously unwrapped from phase(0) = 0
  };

  // u = E_c cos(x/3) + E_s sin(x/3); throws OutsideRadius for
  // t >= R (1 - margin).
  Eval eval(double x, double t) const;

  // Raw N-term partial-sum amplitude, no radius guard: probes divergence.
  double partial_sum_amplitude(int n_terms, double t) const;

  // Raw N-term partial sums of E_c and E_s, no radius guard.
  void partial_sum_components(int n_terms, double t, double* ec,
                              double* es) const;

 private:
  void partial_sums(double t, int n_cap, double* ec, double* es,
                    bool guarded) const;

  CoeffSeq seq_;
  double radius_ = 0.0;
  double margin_ = 0.05;
};

struct ShortAsymp {
  double amplitude = 0.0;
  double phase = 0.0;
};

// Leading short-time behavior:
//   A = sqrt(3/2) - (1/(3 sqrt 6))(1/G(1+2b) - 1/(2 G(1+b)^2)) t^{2b},
//   phase = t^b / G(1+b).
ShortAsymp short_asymp(double beta, double t);

}  // namespace frh::k33
