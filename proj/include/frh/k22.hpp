#pragma once

#include <span>
#include <vector>

#include "frh/errors.hpp"
#include "frh/trigpoly.hpp"

namespace frh::k22 {

// Nonlocality orders and wave speed of the quadratic equation
//   d_t^beta u + d_x(u^2) - d_x (-d_xx)^{alpha/2} (u^2) = 0.
struct Params {
  double alpha = 2.0;  // spatial order, (0, 2]
  double beta = 1.0;   // temporal order, (0, 1]
  double c = 1.0;      // wave speed, > 0

  Params() = default;
  Params(double alpha_, double beta_, double c_);

  // gamma = 2^{1-alpha} (2^alpha - 1) / 3, in (0, 1/2]; 1/2 at alpha = 2.
  double gamma_factor() const;
};

// Closed-form series coefficient u_n(x, t); u_0 = (4c/3) cos^2(x/4).
double coefficient(int n, const Params& p, double x, double t);

// Resummed solution
//   u = (2c/3) {1 + cos(x/2) E_{2b}(-(g c t^b)^2)
//              + sin(x/2) g c t^b E_{2b,1+b}(-(g c t^b)^2)}.
double solution(const Params& p, double x, double t, double tol = 1e-11);

// Direct functional iteration of the recurrence in an exact trig algebra on
// harmonics {0, 1/2, 1}; returns the spatial part of each u_n, i.e. the
// polynomial multiplying t^{beta n} (1/Gamma(1+beta n) included).
std::vector<TrigPoly> oracle_iterate(const Params& p, int n_max);

// Normalized time T with u_{alpha,c}(x, t) = c * u_{2,1}(x, T).
double normalize_time(const Params& p, double t);

// --- dynamics diagnostics; all run at the normalization alpha=2, c=1 ---

struct AmpPhaseSample {
  double t = 0.0;
  double amplitude = 0.0;  // A(t), A(0) = 1
  double phase = 0.0;      // continuously unwrapped, phase(0) = 0
  int branch = 0;          // half-turn count of the underlying angle
};

// A(t) and unwrapped phase(t) along an increasing grid starting at 0.
// The path is refined internally until consecutive phase samples differ by
// less than pi/2; refined points are included in the output.
std::vector<AmpPhaseSample> amplitude_phase(double beta,
                                            std::span<const double> t_grid);

// Pointwise amplitude (no path state needed; amplitude is single-valued).
double amplitude(double beta, double t);

// d(phase)/dt from the smooth angle components; single-valued in t.
double phase_derivative(double beta, double t);

enum class Regime { Short, Long };

// Leading-order amplitude: short: 1 - t^{2b}/8 (2/G(1+2b) - 1/G(1+b)^2);
// long: (2/G(1-b)) t^{-b} (coefficient exactly 0 at beta = 1).
double asymp_amplitude(double beta, double t, Regime regime);

// Phase branch index k: the locked phase is (2k-1) pi. Equals 1 for
// beta <= 1/2; for beta > 1/2 it is the certified count of sign-changing
// zeros of x -> E_{2 beta}(-x).
int branch_index(double beta);

// Long-time phase: (2k-1) pi - 4 G(1-b)/G(1-2b) t^{-b} for beta != 1/2;
// pi - sqrt(pi) e^{-t/4} sqrt(t) at beta = 1/2.
double asymp_phase(double beta, double t);

// Bisection over beta of the predicate "A' has a sign change on (0, t_max]";
// returns the threshold between monotone and oscillatory amplitude decay.
double find_beta_c(double tol_beta = 1e-3, double t_max = 1000.0);

// First t where A' changes sign from negative to positive (first local
// minimum of A). Throws NoLocalMinimum if none exists up to t_max.
double find_t_beta(double beta, double t_max = 500.0);

// All roots of phase'(t) on (0, t_max], each refined to +-1e-3.
std::vector<double> phase_critical_points(double beta, double t_max);

}  // namespace frh::k22
