// asympwave <command> --config <path> [--out <dir>] [--override key=value ...]
//
// Commands: reduced-solve, admissibility-check, shock-time, optical-scan,
// residual-scan, poincare-check, backward-solve, horizon-compare,
// constraint-check. Exit codes: 0 all checks pass, 1 a check failed,
// 2 usage or configuration error.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "asympwave/admissibility.hpp"
#include "asympwave/backward.hpp"
#include "asympwave/config.hpp"
#include "asympwave/report.hpp"

namespace aw = asympwave;

namespace {

struct CommandContext {
  aw::RunConfig cfg;
  std::string out_dir;
  aw::Report report;

  std::string path(const std::string& name) const { return out_dir + "/" + name; }
};

void run_reduced_solve(CommandContext& ctx) {
  const aw::ReducedSolution sol = ctx.cfg.make_solution();
  const auto q_nodes =
      aw::linspace(-ctx.cfg.reduced_q_span, ctx.cfg.reduced_q_span, ctx.cfg.reduced_n_q);
  const std::vector<aw::Direction> omegas =
      sol.radial ? std::vector<aw::Direction>{aw::Direction{}} : aw::direction_grid(8);
  const aw::ReducedGrid init = aw::sample_reduced(sol, 0.0, q_nodes, omegas);
  const aw::IntegrateResult res = aw::integrate_reduced(*sol.system, init, ctx.cfg.reduced_s_span,
                                                        ctx.cfg.reduced_steps);
  double worst = 0.0;
  const aw::ReducedGrid& traj = res.trajectory;
  for (size_t k = 0; k < traj.s_nodes.size(); ++k) {
    const double s = traj.s_nodes[k];
    for (size_t wi = 0; wi < omegas.size(); ++wi) {
      for (size_t j = 0; j < q_nodes.size(); ++j) {
        const double mu_ref = sol.mu(s, q_nodes[j], omegas[wi]);
        worst = std::max(worst, std::fabs(traj.values[k][wi].mu[j] - mu_ref));
        for (int I = 0; I < sol.M; ++I) {
          const double muUq_ref = mu_ref * sol.Uq(s, q_nodes[j], omegas[wi], I);
          worst = std::max(worst, std::fabs(traj.values[k][wi].muUq[I][j] - muUq_ref));
        }
      }
    }
  }
  ctx.report.add("trajectory_vs_closed_form_sup", worst, 1e-6, worst < 1e-6,
                 "reduced/integrate_reduced");
  ctx.report.add("half_step_diff", res.half_step_diff, 1e-6, res.half_step_diff < 1e-6,
                 "reduced/integrate_reduced", "O(h^4) self-convergence probe");
  ctx.report.add("blow_up_flag", res.blow_up ? 1.0 : 0.0, 0.0, !res.blow_up,
                 "reduced/integrate_reduced");
}

void run_admissibility(CommandContext& ctx) {
  const aw::ReducedSolution sol = ctx.cfg.make_solution();
  const aw::AdmissibilityGrid grid = aw::AdmissibilityGrid::standard(
      sol, ctx.cfg.adm_s_max, ctx.cfg.adm_q_span, ctx.cfg.adm_n_s, ctx.cfg.adm_n_q);
  const aw::AdmissibilityReport rep =
      aw::check_admissible(sol, ctx.cfg.gamma_plus, ctx.cfg.gamma_minus, grid);
  std::vector<std::vector<double>> rows;
  for (const auto& b : rep.bounds) {
    rows.push_back({std::stod(b.bound_id.substr(2)), b.fitted_C, b.margin, b.worst_s,
                    b.worst_q});
    ctx.report.add("bound_" + b.bound_id, b.fitted_C, rep.stability_threshold,
                   b.finite && b.stable, "admissibility/check_admissible",
                   b.finite ? "margin = refinement change" : "non-finite fitted constant");
  }
  ctx.report.csv_schemas["admissibility.csv"] = {
      {"bound_id", "minor index of the bound (3 -> 3.3, ..., 10 -> 3.10)"},
      {"fitted_C", "smallest stable envelope constant"},
      {"margin", "relative change under grid refinement"},
      {"s", "worst sample slow time"},
      {"q", "worst sample retarded coordinate"}};
  aw::write_csv(ctx.path("admissibility.csv"), {"bound_id", "fitted_C", "margin", "s", "q"},
                rows);
  ctx.report.add("admissible", rep.pass ? 1.0 : 0.0, 1.0, rep.pass,
                 "admissibility/check_admissible", rep.caveat);
}

void run_shock_time(CommandContext& ctx) {
  std::function<double(double, int)> v0;
  if (ctx.cfg.shock_profile == "neg_sin") {
    v0 = [](double q, int d) { return d == 0 ? -std::sin(q) : -std::cos(q); };
  } else if (ctx.cfg.shock_profile == "smoothed_step") {
    const double a = ctx.cfg.shock_step_lo, b = ctx.cfg.shock_step_hi;
    v0 = [a, b](double q, int d) {
      const double th = std::tanh(q);
      if (d == 0) return 0.5 * (a + b) + 0.5 * (b - a) * th;
      return 0.5 * (b - a) * (1.0 - th * th);
    };
  } else if (ctx.cfg.shock_profile == "scattering") {
    const aw::ScatteringData A = ctx.cfg.make_scattering();
    v0 = [A](double q, int d) { return A.A(q, aw::Direction{}, d); };
  } else {
    throw std::invalid_argument("unknown shock profile '" + ctx.cfg.shock_profile + "'");
  }
  const aw::HormanderFamily family = ctx.cfg.shock_family == "burgers"
                                         ? aw::HormanderFamily::burgers
                                         : aw::HormanderFamily::riccati;
  const double s_star = aw::hormander_shock_time(v0, family, 1.0, ctx.cfg.shock_q_lo,
                                                 ctx.cfg.shock_q_hi, ctx.cfg.shock_n_nodes);
  if (ctx.cfg.shock_expected > 0.0) {
    const bool ok = std::fabs(s_star - ctx.cfg.shock_expected) <=
                    ctx.cfg.shock_rel_tol * ctx.cfg.shock_expected;
    ctx.report.add("shock_time", s_star, ctx.cfg.shock_expected, ok,
                   "reduced/hormander_shock_time");
  } else {
    ctx.report.add("shock_time", s_star, 0.0, true, "reduced/hormander_shock_time",
                   std::isinf(s_star) ? "no blow-up (rarefaction-type data)"
                                      : "finite blow-up");
  }
}

void run_optical_scan(CommandContext& ctx) {
  const aw::ReducedSolution sol = ctx.cfg.make_solution();
  const aw::OpticalParams params = ctx.cfg.make_optical(sol);
  const aw::Direction dir;
  const auto t_nodes = aw::logspace(ctx.cfg.scan_t_lo, ctx.cfg.scan_t_hi, ctx.cfg.scan_n_t);

  std::vector<std::vector<double>> rows;
  std::vector<std::pair<double, double>> eik_samples;
  double max_dev_norm = 0.0, ratio_C = 0.0;
  for (double t : t_nodes) {
    for (double q0 : ctx.cfg.scan_q_values) {
      const double r = aw::invert_r(t, q0, dir, sol, params);
      const aw::ConeSample smp = aw::solve_q_nu(t, r, dir, sol, params);
      const double eik = aw::eikonal_residual(t, r, dir, sol, params);
      rows.push_back({t, r, smp.q, smp.nu, smp.q - (r - t), eik});
      const double norm =
          std::pow(aw::bracket(std::max(0.0, -smp.q)), 1.0 - ctx.cfg.gamma_minus);
      max_dev_norm = std::max(max_dev_norm, std::fabs(smp.q - (r - t)) / norm);
      ratio_C = std::max(
          ratio_C, std::fabs(std::log(aw::bracket(smp.q) / aw::bracket(r - t))) /
                       std::max(params.epsilon * std::log(t + r), 1e-300));
      if (std::fabs(q0) <= 5.0 && std::fabs(eik) > 0.0)
        eik_samples.emplace_back(t, std::fabs(eik));
    }
  }
  ctx.report.csv_schemas["optical_scan.csv"] = {
      {"t", "time"},
      {"r", "radius solving q(t,r) = q0"},
      {"q", "optical function"},
      {"nu", "outgoing derivative q_t + q_r"},
      {"q_minus_rmt", "q - (r - t)"},
      {"eikonal_residual", "g^{ab} q_a q_b"}};
  aw::write_csv(ctx.path("optical_scan.csv"),
                {"t", "r", "q", "nu", "q_minus_rmt", "eikonal_residual"}, rows);

  ctx.report.add("max_normalized_deviation", max_dev_norm, 0.0, std::isfinite(max_dev_norm),
                 "optical/q_deviation_report");
  ctx.report.add("two_sided_ratio_C", ratio_C, 1.0, ratio_C < 1.0,
                 "optical/q_deviation_report");
  const bool trivial_mu = sol.kind == aw::ReducedKind::closed_semilinear;
  if (!trivial_mu && eik_samples.size() >= 5) {
    const aw::DecayFit fit = aw::fit_decay_exponent(eik_samples);
    ctx.report.add("eikonal_decay_exponent", fit.exponent, -2.0 + 0.3,
                   fit.exponent <= -2.0 + 0.3, "optical/eikonal_residual");
  }
}

void run_residual_scan(CommandContext& ctx) {
  const aw::ReducedSolution sol = ctx.cfg.make_solution();
  if (sol.kind != aw::ReducedKind::closed_semilinear)
    throw std::invalid_argument("residual-scan: supported for the semilinear family only");
  const aw::OpticalParams params = ctx.cfg.make_optical(sol);
  const aw::CutoffSpec spec{ctx.cfg.cutoff_c};
  aw::UappEvaluator field(sol, params, spec);
  const aw::Direction dir;
  const auto& coeffs = *sol.system;
  const auto t_nodes = aw::logspace(ctx.cfg.scan_t_lo, ctx.cfg.scan_t_hi, ctx.cfg.scan_n_t);

  std::vector<std::vector<double>> rows;
  std::vector<std::pair<double, double>> res_samples;
  bool cancellation_ok = true;
  for (double t : t_nodes) {
    double worst = 0.0, peak_f = 0.0;
    std::vector<aw::WaveResidualSample> row;
    for (double q0 : ctx.cfg.scan_q_values) {
      const double r = t + q0;
      field.set_q_anchor(q0);
      const aw::WaveResidualSample smp = aw::wave_residual(t, r, dir, field, coeffs);
      rows.push_back({t, r, q0, std::fabs(smp.residual[0]), smp.piece_g[0], smp.piece_f[0]});
      worst = std::max(worst, std::fabs(smp.residual[0]));
      peak_f = std::max(peak_f, std::fabs(smp.piece_f[0]));
      row.push_back(smp);
    }
    // leading-order cancellation, gated to the profile's active window
    if (t >= 10.0 / params.epsilon) {
      for (const auto& smp : row) {
        if (std::fabs(smp.piece_f[0]) < 1e-3 * peak_f) continue;
        const double pieces = std::max(std::fabs(smp.piece_g[0]), std::fabs(smp.piece_f[0]));
        if (std::fabs(smp.residual[0]) > 0.2 * pieces) cancellation_ok = false;
      }
    }
    if (worst > 0.0) res_samples.emplace_back(t, worst);
  }
  ctx.report.csv_schemas["residual_scan.csv"] = {
      {"t", "time"},
      {"r", "radius t + q"},
      {"q", "retarded coordinate"},
      {"residual_norm", "|g^{ab} d_a d_b u_app - f|"},
      {"piece_g", "quasilinear piece"},
      {"piece_f", "semilinear piece"}};
  aw::write_csv(ctx.path("residual_scan.csv"),
                {"t", "r", "q", "residual_norm", "piece_g", "piece_f"}, rows);
  const aw::DecayFit fit = aw::fit_decay_exponent(res_samples);
  ctx.report.add("residual_decay_exponent", fit.exponent, -3.0 + 0.3,
                 fit.exponent <= -3.0 + 0.3, "profile/wave_residual");
  ctx.report.add("residual_cancellation", cancellation_ok ? 1.0 : 0.0, 1.0, cancellation_ok,
                 "profile/wave_residual", "|residual| <= 0.2 max(|piece_g|, |piece_f|)");
}

void run_poincare(CommandContext& ctx) {
  const aw::ReducedSolution sol = ctx.cfg.make_solution();
  const aw::OpticalParams params = ctx.cfg.make_optical(sol);
  aw::WeightParams wparams = ctx.cfg.make_weights();
  wparams.validate(ctx.cfg.gamma_plus, ctx.cfg.gamma_minus);
  wparams.delta = params.delta;
  const aw::Direction dir;

  struct Variant {
    aw::PoincareVariant kind;
    double eta;
    double t;
    const char* name;
  };
  const std::vector<Variant> variants = {
      {aw::PoincareVariant::lp1, 2.5, 200.0, "lp1_t200"},
      {aw::PoincareVariant::lp1, 2.5, 2000.0, "lp1_t2000"},
      {aw::PoincareVariant::lp1st, 1.2, 200.0, "lp1st_t200"},
      {aw::PoincareVariant::lp1st, 0.25, 2000.0, "lp1st_t2000"},
      {aw::PoincareVariant::lp2, 0.0, 200.0, "lp2_t200"},
      {aw::PoincareVariant::lp2, 0.0, 2000.0, "lp2_t2000"},
  };
  const double c = ctx.cfg.cutoff_c;
  for (const auto& var : variants) {
    double worst = 0.0, worst_fine = 0.0;
    for (int k = 0; k < ctx.cfg.poincare_seeds; ++k) {
      for (int res = 0; res < 2; ++res) {
        const int nodes = ctx.cfg.poincare_nodes * (res + 1);
        const aw::FieldSnapshot snap =
            aw::random_snapshot(ctx.cfg.seed + k, var.t, 20.0, nodes);
        aw::PoincareResult pr;
        if (var.kind == aw::PoincareVariant::lp2) {
          std::vector<aw::ConeSample> cone(snap.r_nodes.size());
          for (size_t i = 0; i < snap.r_nodes.size(); ++i) {
            const double r = snap.r_nodes[i];
            if (r > 0.5 * var.t * (1.0 + 1e-9)) {
              cone[i] = aw::solve_q_nu(var.t, r, dir, sol, params);
            } else {
              cone[i].t = var.t;
              cone[i].r = r;
              cone[i].q = r - var.t;
              cone[i].q_t = -1.0;
              cone[i].q_r = 1.0;
              cone[i].mu = -2.0;
            }
          }
          pr = aw::poincare_ratio(snap, 0.0, c, var.kind, &cone, &wparams);
        } else {
          pr = aw::poincare_ratio(snap, var.eta, c, var.kind);
        }
        double& dst = res == 0 ? worst : worst_fine;
        dst = std::max(dst, pr.ratio);
      }
    }
    const double drift = std::fabs(worst_fine - worst) / std::max(worst, 1e-300);
    ctx.report.add(std::string("ratio_") + var.name, worst, 0.0,
                   std::isfinite(worst) && drift < 0.10, "energy/poincare_ratio",
                   "resolution-doubling drift " + std::to_string(drift));
  }
}

aw::BackwardRun backward_run_for(const CommandContext& ctx, double T, double dr,
                                 std::vector<double> snapshot_times) {
  const aw::ReducedSolution sol = ctx.cfg.make_solution();
  const aw::OpticalParams params = ctx.cfg.make_optical(sol);
  aw::WeightParams wparams = ctx.cfg.make_weights();
  wparams.validate(ctx.cfg.gamma_plus, ctx.cfg.gamma_minus);
  wparams.delta = params.delta;
  const aw::CutoffSpec spec{ctx.cfg.cutoff_c};
  const double t_min = params.T_eps();
  const aw::SemilinearProfileTable profile(sol, params, spec, t_min, 2.0 * T,
                                           (1.0 + ctx.cfg.cutoff_c) * 2.0 * T + 10.0);
  aw::BackwardGridSpec bspec;
  bspec.T = T;
  bspec.t_min = t_min;
  bspec.dr = dr;
  bspec.cfl = ctx.cfg.backward_cfl;
  bspec.r_max = ctx.cfg.backward_r_max;
  bspec.snapshot_times = std::move(snapshot_times);
  bspec.energy_stride = 4;
  return aw::solve_backward(profile, wparams, bspec);
}

void run_backward_solve(CommandContext& ctx) {
  const double T = ctx.cfg.backward_T > 0.0 ? ctx.cfg.backward_T : 4.0 / ctx.cfg.epsilon;
  const double t_min = 1.0 / ctx.cfg.epsilon;
  const aw::BackwardRun run = backward_run_for(ctx, T, ctx.cfg.backward_dr, {t_min + 1.0});

  // fit window [1/eps, T] with one step of slack at the top, since the
  // discrete history samples just inside it
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<double, double>> fit_samples;
  for (size_t k = 0; k < run.energy_times.size(); ++k) {
    rows.push_back({run.energy_times[k], run.energy_w0[k], run.sup_v[k]});
    if (run.energy_times[k] >= t_min && run.energy_times[k] <= T + 1.0 &&
        run.energy_w0[k] > 0.0)
      fit_samples.emplace_back(run.energy_times[k], run.energy_w0[k]);
  }
  ctx.report.csv_schemas["backward_solve.csv"] = {
      {"t", "time"},
      {"energy_w0", "||w0^{1/2} dv(t)||_L2"},
      {"sup_v", "sup_r |v(t, r)|"}};
  aw::write_csv(ctx.path("backward_solve.csv"), {"t", "energy_w0", "sup_v"}, rows);

  const aw::DecayFit fit = aw::fit_decay_exponent(fit_samples);
  ctx.report.add("energy_decay_exponent", fit.exponent, -0.5,
                 fit.exponent >= -0.8 && fit.exponent <= -0.3, "backward/solve_backward",
                 "target window [-0.8, -0.3]");
  ctx.report.add("support_margin", run.support_margin_violation, 1e-10,
                 run.support_margin_violation < 1e-10, "backward/solve_backward");

  if (ctx.cfg.backward_convergence_check) {
    const aw::BackwardRun coarse =
        backward_run_for(ctx, T, 2.0 * ctx.cfg.backward_dr, {t_min + 1.0});
    double rel = 0.0;
    for (size_t k = 0; k < coarse.energy_times.size(); ++k) {
      const double t = coarse.energy_times[k];
      if (t < t_min || t > T) continue;
      size_t best = 0;
      for (size_t j = 1; j < run.energy_times.size(); ++j)
        if (std::fabs(run.energy_times[j] - t) < std::fabs(run.energy_times[best] - t))
          best = j;
      rel = std::max(rel, std::fabs(run.energy_w0[best] - coarse.energy_w0[k]) /
                              std::max(run.energy_w0[best], 1e-300));
    }
    ctx.report.add("grid_halving_energy_change", rel, 0.05, rel < 0.05,
                   "backward/solve_backward");
  }
}

void run_horizon_compare(CommandContext& ctx) {
  const double t_min = 1.0 / ctx.cfg.epsilon;
  aw::WeightParams wparams = ctx.cfg.make_weights();
  wparams.validate(ctx.cfg.gamma_plus, ctx.cfg.gamma_minus);
  const std::vector<double> T1s = {4.0 / ctx.cfg.epsilon, 8.0 / ctx.cfg.epsilon,
                                   16.0 / ctx.cfg.epsilon};
  std::vector<std::pair<double, double>> diff_vs_T1;
  std::vector<std::vector<double>> rows;
  for (double T1 : T1s) {
    std::vector<double> snaps;
    for (double t : aw::logspace(t_min + 1.0, T1, 9)) snaps.push_back(t);
    const double dr = ctx.cfg.backward_dr * 4.0;  // shared grid across the pair
    const aw::BackwardRun run1 = backward_run_for(ctx, T1, dr, snaps);
    const aw::BackwardRun run2 = backward_run_for(ctx, 2.0 * T1, dr, snaps);
    const aw::HorizonCompareResult cmp =
        aw::horizon_compare(run1, run2, ctx.cfg.lambda0, ctx.cfg.epsilon, wparams);
    diff_vs_T1.emplace_back(T1, cmp.max_energy_diff);
    for (const auto& [t, d] : cmp.energy_diff_series) rows.push_back({T1, t, d});
  }
  ctx.report.csv_schemas["horizon_compare.csv"] = {
      {"T1", "smaller horizon"},
      {"t", "comparison time"},
      {"energy_diff", "||w0^{1/2} d(v1 - v2)(t)||_L2 for T2 = 2 T1"}};
  aw::write_csv(ctx.path("horizon_compare.csv"), {"T1", "t", "energy_diff"}, rows);

  std::vector<double> xs, ys;
  for (const auto& [T1, d] : diff_vs_T1) {
    xs.push_back(std::log(T1));
    ys.push_back(std::log(std::max(d, 1e-300)));
  }
  const aw::LineFit fit = aw::least_squares_line(xs, ys);
  ctx.report.add("horizon_shrink_rate", fit.slope, -0.3, fit.slope <= -0.3,
                 "backward/horizon_compare",
                 "envelope -1/2+lambda0 with lambda0 = " + std::to_string(ctx.cfg.lambda0));
}

void run_constraint_check(CommandContext& ctx) {
  const aw::ReducedSolution sol = ctx.cfg.make_solution();
  if (sol.M != 4)
    throw std::invalid_argument("constraint-check: the semilinear family is unconstrained");
  const auto q_nodes =
      aw::linspace(-ctx.cfg.reduced_q_span, ctx.cfg.reduced_q_span, ctx.cfg.reduced_n_q);
  const std::vector<aw::Direction> omegas =
      sol.radial ? std::vector<aw::Direction>{aw::Direction::from(0.3, -0.4, 0.866)}
                 : aw::direction_grid(8);
  const aw::ReducedGrid closed = aw::sample_reduced(sol, 0.0, q_nodes, omegas);
  for (const auto& [name, value] : aw::constraint_residual(sol, closed))
    ctx.report.add("closed_form_" + name, value, 1e-12, value < 1e-12,
                   "reduced/constraint_residual");
  const aw::IntegrateResult res = aw::integrate_reduced(*sol.system, closed, 2.0, 64, false);
  for (const auto& [name, value] : aw::constraint_residual(sol, res.trajectory))
    ctx.report.add("propagated_" + name, value, 1e-6, value < 1e-6,
                   "reduced/constraint_residual", "64 RK4 steps");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"candidate global solutions to quasilinear wave systems: reduced-system, "
               "optical, profile, energy, and backward-matching checks"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "output directory (default $ASYMPWAVE_OUT or ./out)");
  app.add_option("--override", overrides, "key=value configuration overrides");

  const std::vector<std::pair<std::string, void (*)(CommandContext&)>> commands = {
      {"reduced-solve", run_reduced_solve},
      {"admissibility-check", run_admissibility},
      {"shock-time", run_shock_time},
      {"optical-scan", run_optical_scan},
      {"residual-scan", run_residual_scan},
      {"poincare-check", run_poincare},
      {"backward-solve", run_backward_solve},
      {"horizon-compare", run_horizon_compare},
      {"constraint-check", run_constraint_check},
  };
  for (const auto& [name, fn] : commands) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CommandContext ctx;
  try {
    ctx.cfg = asympwave::load_config(config_path, overrides);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  ctx.out_dir = asympwave::output_dir(!out_dir.empty() ? out_dir : ctx.cfg.out_dir);

  const auto started = std::chrono::steady_clock::now();
  for (const auto& [name, fn] : commands) {
    if (!app.get_subcommand(name)->parsed()) continue;
    ctx.report.command = name;
    ctx.report.config_echo = ctx.cfg.echo;
    try {
      fn(ctx);
    } catch (const std::invalid_argument& e) {
      std::cerr << "usage/config error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << name << " failed: " << e.what() << "\n";
      return 1;
    }
    ctx.report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    ctx.report.write(ctx.path("report.json"));
    for (const auto& c : ctx.report.checks) {
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << " = " << c.value;
      if (c.envelope != 0.0) std::cout << " (envelope " << c.envelope << ")";
      std::cout << "\n";
    }
    return ctx.report.all_pass() ? 0 : 1;
  }
  return 2;
}
