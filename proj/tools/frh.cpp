#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "frh/config.hpp"
#include "frh/errors.hpp"
#include "frh/fkdv.hpp"
#include "frh/k22.hpp"
#include "frh/k33.hpp"
#include "frh/report.hpp"
#include "frh/specfun.hpp"
#include "frh/table.hpp"

namespace sf = frh::specfun;
using frh::table::Table;
using nlohmann::json;

namespace {

struct Output {
  std::string format = "csv";
  std::string path;  // empty = stdout

  int write(Table& t, const std::string& command, const json& params) const {
    t.meta["command"] = command;
    t.meta["format"] = format;
    for (auto it = params.begin(); it != params.end(); ++it)
      t.meta[it.key()] = it.value();
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) {
        std::cerr << "frh: cannot open output file " << path << "\n";
        return 2;
      }
      os = &file;
    }
    if (format == "json")
      frh::table::emit_json(t, *os);
    else
      frh::table::emit_csv(t, *os);
    return 0;
  }
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  if (n <= 1) {
    v.push_back(lo);
    return v;
  }
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Rosenau-Hyman / KdV series laboratory"};
  app.require_subcommand(1);
  Output out;
  app.add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", out.path, "output path (default: stdout)");
  bool fast = false;
  app.add_flag("--fast", fast, "halve grid densities, double tolerances");

  int rc = 0;
  auto run_guarded = [&](const std::function<int()>& fn) {
    try {
      rc = fn();
    } catch (const frh::Error& e) {
      std::cerr << "frh: " << e.what() << "\n";
      rc = 3;
    }
  };

  // ------------------------------------------------------------------ ml
  auto* ml = app.add_subcommand("ml", "Mittag-Leffler evaluation");
  struct {
    double a = 1.0, b = 1.0, x = 0.0;
    double rel = frh::config().ml_target_rel_err;
    double x_max = 100.0;
  } mlq;
  auto* mleval = ml->add_subcommand("eval", "evaluate E_{a,b}(x)");
  for (auto* cmd : {ml, mleval}) {
    cmd->add_option("--a", mlq.a, "first order");
    cmd->add_option("--b", mlq.b, "second parameter");
    cmd->add_option("--x", mlq.x, "argument");
    cmd->add_option("--target-rel-err", mlq.rel, "accuracy request");
  }
  auto ml_eval_cb = [&] {
    run_guarded([&] {
      auto rres = sf::ml_eval({mlq.a, mlq.b, mlq.x}, mlq.rel);
      Table t;
      t.columns = {"a", "b", "x", "value", "est_abs_error", "strategy"};
      t.add_row({mlq.a, mlq.b, mlq.x, rres.value, rres.est_abs_error,
                 sf::strategy_name(rres.strategy)});
      return out.write(t, "ml eval",
                       {{"a", mlq.a},
                        {"b", mlq.b},
                        {"x", mlq.x},
                        {"target_rel_err", mlq.rel}});
    });
  };
  mleval->callback(ml_eval_cb);
  auto* mlzeros = ml->add_subcommand("zeros", "zeros of E_a(-x) on (0, x_max]");
  mlzeros->add_option("--a", mlq.a, "order");
  mlzeros->add_option("--x-max", mlq.x_max, "scan limit")
      ->capture_default_str();
  mlzeros->callback([&] {
    run_guarded([&] {
      auto z = sf::ml_zeros(mlq.a, mlq.x_max);
      Table t;
      t.columns = {"index", "x"};
      for (size_t i = 0; i < z.zeros.size(); ++i)
        t.add_row({static_cast<long long>(i), z.zeros[i]});
      t.meta["complete"] = z.complete;
      return out.write(t, "ml zeros", {{"a", mlq.a}, {"x_max", mlq.x_max}});
    });
  });
  ml->callback([&] {
    if (ml->get_subcommands().empty()) ml_eval_cb();
  });

  // ----------------------------------------------------------------- k22
  auto* k22c = app.add_subcommand("k22", "quadratic fractional equation");
  struct {
    double alpha = 2.0, beta = 0.8, c = 1.0;
    std::vector<double> xs{0.0};
    std::vector<double> ts{1.0};
    double t_max = 60.0, t_max_bc = 1000.0, t_max_tb = 500.0,
           t_max_pc = 60.0;
    double tol_beta = 1e-3, t = 100.0;
    int t_samples = 200;
    std::string regime = "long";
  } kq;

  auto* ksol = k22c->add_subcommand("solution", "resummed field u(x,t)");
  ksol->add_option("--alpha", kq.alpha)->capture_default_str();
  ksol->add_option("--beta", kq.beta)->capture_default_str();
  ksol->add_option("--c", kq.c)->capture_default_str();
  ksol->add_option("--x", kq.xs, "x values")->delimiter(',');
  ksol->add_option("--t", kq.ts, "t values")->delimiter(',');
  ksol->callback([&] {
    run_guarded([&] {
      frh::k22::Params p(kq.alpha, kq.beta, kq.c);
      Table t;
      t.columns = {"x", "t", "u"};
      for (double tv : kq.ts)
        for (double xv : kq.xs)
          t.add_row({xv, tv, frh::k22::solution(p, xv, tv)});
      return out.write(t, "k22 solution",
                       {{"alpha", kq.alpha},
                        {"beta", kq.beta},
                        {"c", kq.c},
                        {"gamma_factor", p.gamma_factor()}});
    });
  });

  auto* kamp = k22c->add_subcommand("amp-phase", "amplitude/phase path");
  kamp->add_option("--beta", kq.beta)->required();
  kamp->add_option("--t-max", kq.t_max)->capture_default_str();
  kamp->add_option("--t-samples", kq.t_samples)->capture_default_str();
  kamp->callback([&] {
    run_guarded([&] {
      auto grid = linspace(0.0, kq.t_max, fast ? kq.t_samples / 2 + 1
                                               : kq.t_samples);
      auto path = frh::k22::amplitude_phase(kq.beta, grid);
      Table t;
      t.columns = {"t", "amplitude", "phase", "branch"};
      for (const auto& s : path)
        t.add_row({s.t, s.amplitude, s.phase, s.branch});
      return out.write(t, "k22 amp-phase",
                       {{"beta", kq.beta},
                        {"t_max", kq.t_max},
                        {"t_samples", kq.t_samples}});
    });
  });

  auto* kbc = k22c->add_subcommand("beta-c", "amplitude bifurcation threshold");
  kbc->add_option("--tol-beta", kq.tol_beta)->capture_default_str();
  kbc->add_option("--t-max", kq.t_max_bc)->capture_default_str();
  kbc->callback([&] {
    run_guarded([&] {
      double bc = frh::k22::find_beta_c(fast ? 2.0 * kq.tol_beta : kq.tol_beta,
                                        kq.t_max_bc);
      Table t;
      t.columns = {"beta_c"};
      t.add_row({bc});
      return out.write(t, "k22 beta-c",
                       {{"tol_beta", kq.tol_beta}, {"t_max", kq.t_max_bc}});
    });
  });

  auto* ktb = k22c->add_subcommand("t-beta", "first local minimum of A(t)");
  ktb->add_option("--beta", kq.beta)->required();
  ktb->add_option("--t-max", kq.t_max_tb)->capture_default_str();
  ktb->callback([&] {
    run_guarded([&] {
      double tb = frh::k22::find_t_beta(kq.beta, kq.t_max_tb);
      Table t;
      t.columns = {"beta", "t_beta"};
      t.add_row({kq.beta, tb});
      return out.write(t, "k22 t-beta",
                       {{"beta", kq.beta}, {"t_max", kq.t_max_tb}});
    });
  });

  auto* kpc = k22c->add_subcommand("phase-crit", "roots of phase'(t)");
  kpc->add_option("--beta", kq.beta)->required();
  kpc->add_option("--t-max", kq.t_max_pc)->capture_default_str();
  kpc->callback([&] {
    run_guarded([&] {
      auto roots = frh::k22::phase_critical_points(kq.beta, kq.t_max_pc);
      Table t;
      t.columns = {"index", "t"};
      for (size_t i = 0; i < roots.size(); ++i)
        t.add_row({static_cast<long long>(i), roots[i]});
      return out.write(t, "k22 phase-crit",
                       {{"beta", kq.beta}, {"t_max", kq.t_max_pc}});
    });
  });

  auto* kbr = k22c->add_subcommand("branch", "phase locking branch index");
  kbr->add_option("--beta", kq.beta)->required();
  kbr->callback([&] {
    run_guarded([&] {
      int k = frh::k22::branch_index(kq.beta);
      Table t;
      t.columns = {"beta", "branch", "locked_phase_over_pi"};
      t.add_row({kq.beta, k, 2 * k - 1});
      return out.write(t, "k22 branch", {{"beta", kq.beta}});
    });
  });

  auto* kas = k22c->add_subcommand("asymp", "asymptotic amplitude and phase");
  kas->add_option("--beta", kq.beta)->required();
  kas->add_option("--t", kq.t)->capture_default_str();
  kas->add_option("--regime", kq.regime)
      ->check(CLI::IsMember({"short", "long"}))
      ->capture_default_str();
  kas->callback([&] {
    run_guarded([&] {
      auto regime = kq.regime == "short" ? frh::k22::Regime::Short
                                         : frh::k22::Regime::Long;
      Table t;
      t.columns = {"beta", "t", "regime", "amplitude", "phase"};
      double amp = frh::k22::asymp_amplitude(kq.beta, kq.t, regime);
      double ph = kq.regime == "short"
                      ? std::pow(kq.t, kq.beta) * sf::gamma_rec(1.0 + kq.beta)
                      : frh::k22::asymp_phase(kq.beta, kq.t);
      t.add_row({kq.beta, kq.t, kq.regime, amp, ph});
      return out.write(t, "k22 asymp",
                       {{"beta", kq.beta}, {"t", kq.t},
                        {"regime", kq.regime}});
    });
  });

  // ----------------------------------------------------------------- k33
  auto* k33c = app.add_subcommand("k33", "cubic fractional equation");
  struct {
    double beta = 0.3;
    int n_max = 400;
    std::vector<double> xs{0.0};
    std::vector<double> ts{1.0};
  } cq;

  auto* kco = k33c->add_subcommand("coeffs", "coefficient sequence c_n");
  kco->add_option("--beta", cq.beta)->required();
  kco->add_option("--n-max", cq.n_max)->capture_default_str();
  kco->callback([&] {
    run_guarded([&] {
      auto seq = frh::k33::c_sequence(cq.beta, cq.n_max);
      Table t;
      t.columns = {"n", "c", "sign", "log_abs_c", "gamma_n"};
      for (int n = 0; n <= seq.n_max; ++n) {
        t.add_row({n, seq.c(n), seq.sign_e[n], seq.log_abs_c(n),
                   n >= 1 ? json(seq.gamma_n[n]) : json(nullptr)});
      }
      return out.write(t, "k33 coeffs",
                       {{"beta", cq.beta}, {"n_max", cq.n_max}});
    });
  });

  auto* kra = k33c->add_subcommand("radius", "root-test convergence radius");
  kra->add_option("--beta", cq.beta)->required();
  kra->add_option("--n-max", cq.n_max)->capture_default_str();
  kra->callback([&] {
    run_guarded([&] {
      auto gr = frh::k33::gamma_radius(
          frh::k33::c_sequence(cq.beta, fast ? cq.n_max / 2 : cq.n_max));
      Table t;
      t.columns = {"beta", "gamma_est", "radius"};
      t.add_row({cq.beta, gr.gamma_est, gr.radius});
      return out.write(t, "k33 radius",
                       {{"beta", cq.beta}, {"n_max", cq.n_max}});
    });
  });

  auto* kfi = k33c->add_subcommand("field", "resummed field, amplitude, phase");
  kfi->add_option("--beta", cq.beta)->required();
  kfi->add_option("--n-max", cq.n_max)->capture_default_str();
  kfi->add_option("--x", cq.xs)->delimiter(',');
  kfi->add_option("--t", cq.ts)->delimiter(',');
  kfi->callback([&] {
    run_guarded([&] {
      frh::k33::Series s(cq.beta, cq.n_max);
      Table t;
      t.columns = {"x", "t", "u", "amplitude", "phase"};
      for (double tv : cq.ts) {
        for (double xv : cq.xs) {
          auto e = s.eval(xv, tv);
          t.add_row({xv, tv, e.u, e.amplitude, e.phase});
        }
      }
      return out.write(t, "k33 field",
                       {{"beta", cq.beta},
                        {"n_max", cq.n_max},
                        {"radius", s.radius()}});
    });
  });

  // ---------------------------------------------------------------- fkdv
  auto* fk = app.add_subcommand("fkdv", "time-fractional KdV iteration");
  struct {
    std::vector<double> betas{0.2, 0.4, 0.6, 0.8};
    std::vector<double> ts{0.01, 0.21, 0.41, 0.61, 0.81};
    std::vector<int> pairs{6, 7, 8, 9};
    double beta = 0.5, t = 0.5;
    int n_terms = 9;
    int n_resum = 20;
  } fq;

  auto* fra = fk->add_subcommand("ratios", "divergence ratio table");
  fra->add_option("--beta", fq.betas, "beta values")->delimiter(',');
  fra->add_option("--t", fq.ts, "t values")->delimiter(',');
  fra->add_option("--pairs", fq.pairs, "pair labels n+1")->delimiter(',');
  fra->callback([&] {
    run_guarded([&] {
      frh::fkdv::Grid grid;
      if (fast) grid.points /= 2;
      auto cells = frh::fkdv::ratio_table(fq.betas, fq.ts, fq.pairs, grid);
      Table t;
      t.columns = {"beta", "t", "pair", "ratio"};
      for (const auto& c : cells)
        t.add_row({c.beta, c.t, c.pair_hi, c.value});
      return out.write(t, "fkdv ratios",
                       {{"points", grid.points},
                        {"half_length", grid.half_length}});
    });
  });

  auto* ffi = fk->add_subcommand("field", "partial-sum wave profile");
  ffi->add_option("--beta", fq.beta)->required();
  ffi->add_option("--t", fq.t)->capture_default_str();
  ffi->add_option("--n-terms", fq.n_terms)->capture_default_str();
  ffi->callback([&] {
    run_guarded([&] {
      frh::fkdv::Grid grid;
      if (fast) grid.points /= 2;
      frh::fkdv::Series s(grid, fq.beta, fq.n_terms);
      auto u = s.partial_sum(fq.n_terms, fq.t);
      auto xs = grid.coords();
      Table t;
      t.columns = {"x", "u"};
      for (int i = 0; i < grid.points; i += fast ? 16 : 8)
        t.add_row({xs[i], u[i]});
      for (const auto& w : s.aliasing_warnings())
        std::cerr << "frh: " << w << "\n";
      return out.write(t, "fkdv field",
                       {{"beta", fq.beta},
                        {"t", fq.t},
                        {"n_terms", fq.n_terms}});
    });
  });

  auto* fre = fk->add_subcommand("resum", "classical-limit resummation error");
  fre->add_option("--t", fq.t)->capture_default_str();
  fre->add_option("--n-terms", fq.n_resum)->capture_default_str();
  fre->callback([&] {
    run_guarded([&] {
      frh::fkdv::Grid grid;
      if (fast) grid.points /= 2;
      double err = frh::fkdv::resum_beta1_sup_error(grid, fq.n_resum, fq.t);
      Table t;
      t.columns = {"t", "n_terms", "sup_error"};
      t.add_row({fq.t, fq.n_resum, err});
      return out.write(t, "fkdv resum",
                       {{"t", fq.t}, {"n_terms", fq.n_resum}});
    });
  });

  // -------------------------------------------------------------- report
  auto* rep = app.add_subcommand("report", "run the reproducibility suite");
  std::string suite = "all";
  rep->add_option("--suite", suite, "all|specfun|k22|k33|fkdv")
      ->check(CLI::IsMember({"all", "specfun", "k22", "k33", "fkdv"}))
      ->capture_default_str();
  rep->callback([&] {
    run_guarded([&] {
      auto entries = frh::report::run(frh::report::suite_from_name(suite),
                                      fast);
      Table t;
      t.columns = {"id",        "criterion", "module",  "reference",
                   "computed",  "tolerance", "pass",    "seconds"};
      bool all_ok = true;
      for (const auto& e : entries) {
        all_ok = all_ok && e.pass;
        t.add_row({e.id, e.criterion, e.module_tag,
                   e.reference ? json(*e.reference) : json(nullptr),
                   e.computed, e.tolerance, e.pass, e.seconds});
      }
      int wrc = out.write(t, "report", {{"suite", suite}, {"fast", fast}});
      return wrc != 0 ? wrc : (all_ok ? 0 : 1);
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return rc;
}
