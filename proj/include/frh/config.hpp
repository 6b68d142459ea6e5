#pragma once

namespace frh {

// Central record of every numeric default used across the library.
// Operations take explicit overrides where the contract calls for one;
// everything else reads the shared instance returned by config().
struct Config {
  // --- Mittag-Leffler evaluation ---
  double ml_target_rel_err = 1e-11;  // default accuracy request
  double ml_series_band = 5.0;       // |x| below which the power series is
                                     // always acceptable, any order
  double ml_asym_band = 40.0;        // |x| above which the asymptotic form is
                                     // considered first (scaled per order)
  double ml_consistency_overlap = 1e-9;  // required agreement where two
                                         // evaluation strategies overlap
  int ml_series_max_terms = 4000;
  int ml_asym_max_terms = 200;
  int ml_quad_max_level = 10;

  // --- root scanning / refinement ---
  double zero_scan_step_cap = 0.25;    // initial scan step: min(cap, x_max/4000)
  double zero_refine_tol = 1e-10;      // absolute tolerance on located roots
  double tangential_dip_tol = 1e-8;    // |f| below this without a sign change
                                       // raises TangentialZeroSuspected
  double zeros_xmax_cap = 2.0e6;       // escalation limit for certified scans

  // --- differentiation ---
  double diff_h0_scale = 1e-4;  // h0 = scale * max(1, |t|)

  // --- K(2,2) dynamics ---
  double beta_c_lo = 0.5;          // bisection interval for the amplitude
  double beta_c_hi = 0.9;          //   bifurcation threshold
  double beta_c_scan_step = 0.02;  // t-step of the sign-change predicate scan
  double t_beta_scan_step = 0.01;  // t-step of the first-minimum scan
  double t_beta_scan_t0 = 0.05;
  double phase_crit_tol = 1e-3;    // refinement tolerance on phase critical pts
  double unwrap_max_jump = 1.5707963267948966;  // pi/2 between phase samples
  double unwrap_min_step = 1e-9;

  // --- K(3,3) series ---
  double k33_tail_fraction = 0.2;       // tail window for gamma extrapolation
  double k33_tail_rel_variance = 1e-4;  // convergence gate on gamma_n
  double k33_radius_margin = 0.05;      // evaluation refused past R*(1-margin)
  double k33_eval_term_cutoff = 1e-12;  // last retained term vs running sum
  double k33_oracle_check_rel = 1e-10;  // recurrence-vs-oracle agreement
  int k33_oracle_check_n = 40;

  // --- fKdV grid ---
  double fkdv_half_length = 60.0;
  int fkdv_points = 8192;
  double fkdv_boundary_decay = 1e-20;   // required |g_0| at the box edge
  double fkdv_alias_energy = 1e-10;     // top-third spectral energy gate
  double fkdv_spectral_band = 24.0;     // wavenumber band genuinely populated
                                        // by iterates (analytic in |Im x|<pi)
};

const Config& config();

}  // namespace frh
