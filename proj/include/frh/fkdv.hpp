#pragma once

#include <string>
#include <vector>

#include "frh/errors.hpp"

namespace frh::fkdv {

// Periodic box [-L, L) with N (power of two) points; the sech^2 trial
// function decays far below every tolerance at the default edges.
struct Grid {
  double half_length = 60.0;
  int points = 8192;

  double dx() const { return 2.0 * half_length / points; }
  std::vector<double> coords() const;
};

// HPM iterates u_n(x,t) = g_n(x) t^{beta n} for
//   d_t^beta u + d_x^3 u + d_x(u^2/2) = 0,  u_0 = 3 sech^2(x/2),
// with spectral derivatives and zero-padded (dealiased) products.
class Series {
 public:
  Series(const Grid& grid, double beta, int n_terms);

  const Grid& grid() const { return grid_; }
  double beta() const { return beta_; }
  int terms() const { return static_cast<int>(g_.size()) - 1; }

  const std::vector<double>& g(int n) const;
  double sup_g(int n) const;  // max |g_n| over the grid

  // ||u_{n_hi}|| / ||u_{n_hi - 1}|| at time t (sup norms over the grid)
  double ratio(int n_hi, double t) const;

  std::vector<double> partial_sum(int n_terms, double t) const;
  double partial_sum_sup(int n_terms, double t) const;

  const std::vector<std::string>& aliasing_warnings() const {
    return warnings_;
  }

 private:
  Grid grid_;
  double beta_;
  std::vector<std::vector<double>> g_;
  std::vector<double> sup_;
  std::vector<std::string> warnings_;
};

Series iterate(const Grid& grid, double beta, int n_terms);

// Fourier differentiation of a periodic grid function (test surface for the
// discretization underlying the iteration).
std::vector<double> spectral_derivative(const Grid& grid,
                                        const std::vector<double>& g,
                                        int order);

struct RatioCell {
  double beta = 0.0;
  double t = 0.0;
  int pair_hi = 0;  // the (n+1, n) pair labelled by n+1
  double value = 0.0;
};

// Long-format ratio table over (beta, t, pair) triples.
std::vector<RatioCell> ratio_table(const std::vector<double>& betas,
                                   const std::vector<double>& ts,
                                   const std::vector<int>& pair_his,
                                   const Grid& grid = Grid{});

// The three closed-form iterates (reference values for grid validation).
void closed_u123(double beta, double x, double t, double* u1, double* u2,
                 double* u3);

// sup_x | sum_{n<=N} g_n t^n - 3 sech^2((x-t)/2) | at beta = 1.
double resum_beta1_sup_error(const Grid& grid, int n_terms, double t);

struct DivergenceRow {
  double t = 0.0;
  std::vector<double> ratios;  // one per pair
  bool monotone_increasing = false;
};

struct DivergenceReport {
  double beta = 0.0;
  std::vector<int> pair_his;
  std::vector<DivergenceRow> rows;
  double partial_sum_sup_t1 = 0.0;  // sup of the N=9 partial sum at t = 1
};

DivergenceReport divergence_report(double beta, const std::vector<double>& ts,
                                   int n_max, const Grid& grid = Grid{});

}  // namespace frh::fkdv
