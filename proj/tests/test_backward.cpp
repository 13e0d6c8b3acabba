#include <doctest.h>

#include <cmath>

#include "asympwave/backward.hpp"

using namespace asympwave;

namespace {

std::function<double(const Direction&)> one() {
  return [](const Direction&) { return 1.0; };
}

OpticalParams params_for(const ReducedSolution& sol, double eps) {
  OpticalParams p;
  p.epsilon = eps;
  p.delta = 0.5 * sol.delta0;
  p.validate(sol.delta0);
  return p;
}

WeightParams weights_for(double eps) {
  WeightParams p;
  p.gamma1 = 2.4;
  p.gamma2 = 0.2;
  p.c0 = 4.0;
  p.epsilon = eps;
  p.delta = 0.5;
  return p;
}

// Small, fast configuration: eps = 0.1 so T_eps = 10, T = 40.
struct SmallRun {
  ReducedSolution sol;
  OpticalParams params;
  WeightParams wparams;
  SemilinearProfileTable profile;
  BackwardGridSpec spec;

  explicit SmallRun(double amp, double dr = 0.1)
      : sol(closed_form_semilinear(gaussian_data(amp), one())),
        params(params_for(sol, 0.1)),
        wparams(weights_for(0.1)),
        profile(sol, params, CutoffSpec{0.1}, 10.0, 80.0, 100.0) {
    spec.T = 40.0;
    spec.t_min = 10.0;
    spec.dr = dr;
    spec.cfl = 0.9;
    spec.snapshot_times = {12.0, 20.0, 35.0};
  }
};

}  // namespace

TEST_CASE("chi cutoff: plateau, support, monotone transition") {
  CHECK(chi_cutoff(0.5) == 1.0);
  CHECK(chi_cutoff(-0.7) == 1.0);
  CHECK(chi_cutoff(1.0) == 1.0);
  CHECK(chi_cutoff(3.0) == 0.0);
  CHECK(chi_cutoff(-2.5) == 0.0);
  const double mid = chi_cutoff(1.5);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  double prev = 1.0;
  for (double x : linspace(1.0, 2.0, 21)) {
    const double v = chi_cutoff(x);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("zero data keeps v identically zero") {
  SmallRun cfg(0.0);
  const BackwardRun run = solve_backward(cfg.profile, cfg.wparams, cfg.spec);
  for (double e : run.energy_w0) CHECK(e == 0.0);
  for (double s : run.sup_v) CHECK(s == 0.0);
  for (const auto& v : run.v_snap)
    for (double x : v) CHECK(x == 0.0);
}

TEST_CASE("grid and stability guards") {
  SmallRun cfg(-1.0);
  cfg.spec.cfl = 1.2;
  CHECK_THROWS(solve_backward(cfg.profile, cfg.wparams, cfg.spec));
  cfg.spec.cfl = 0.9;
  cfg.spec.r_max = 50.0;  // below the finite-speed envelope
  CHECK_THROWS(solve_backward(cfg.profile, cfg.wparams, cfg.spec));
}

TEST_CASE("gaussian run: finite speed margin, reproducibility, snapshots") {
  SmallRun cfg(-1.0);
  const BackwardRun a = solve_backward(cfg.profile, cfg.wparams, cfg.spec);
  CHECK(a.support_margin_violation < 1e-12);
  REQUIRE(a.v_snap.size() == 3);
  // The field is nontrivial somewhere
  double peak = 0.0;
  for (double s : a.sup_v) peak = std::max(peak, s);
  CHECK(peak > 1e-6);
  CHECK(peak < 1e3 * cfg.params.epsilon);

  // bit-identical rerun
  const BackwardRun b = solve_backward(cfg.profile, cfg.wparams, cfg.spec);
  REQUIRE(a.energy_w0.size() == b.energy_w0.size());
  for (size_t i = 0; i < a.energy_w0.size(); ++i) CHECK(a.energy_w0[i] == b.energy_w0[i]);
  for (size_t k = 0; k < a.v_snap.size(); ++k)
    for (size_t j = 0; j < a.v_snap[k].size(); ++j) CHECK(a.v_snap[k][j] == b.v_snap[k][j]);
}

TEST_CASE("exact-solution property: interior stencil residual is O(dt^2)") {
  // For t <= T (chi == 1), u = u_app + v satisfies the discrete wave
  // equation Box_h u = (D_t u)^2 up to the scheme truncation.
  auto stencil_residual = [](double dr) {
    SmallRun cfg(-1.0, dr);
    cfg.spec.snapshot_times = {20.0};
    const BackwardRun run = solve_backward(cfg.profile, cfg.wparams, cfg.spec);
    const auto& tri = run.phi_triples.at(0);
    const auto& times = run.phi_triple_times.at(0);
    const double t = times[1];
    const double dt = run.dt;
    const Direction dir;
    double worst = 0.0;
    const int n = static_cast<int>(run.r_nodes.size());
    for (int j = 1; j < n - 1; ++j) {
      const double r = run.r_nodes[j];
      if (std::fabs(r - t) > 4.0) continue;  // focus on the active window
      // Phi stencil for v plus the exact profile bundle for u_app.
      const double v = tri[1][j] / r;
      const double v_tt = (tri[2][j] - 2.0 * tri[1][j] + tri[0][j]) / (dt * dt) / r;
      const double v_rr_phi =
          (tri[1][j + 1] - 2.0 * tri[1][j] + tri[1][j - 1]) / (run.dr * run.dr);
      const double v_t = (tri[2][j] - tri[0][j]) / (2.0 * dt) / r;
      const auto b = cfg.profile.eval(t, r, dir);
      // Box(u_app + v) - (d_t(u_app + v))^2 with Box v = (Phi_rr)/r - v_tt
      const double box_v = v_rr_phi / r - v_tt;
      const double ut = b.u_t + v_t;
      const double res = (b.box + box_v) - ut * ut;
      worst = std::max(worst, std::fabs(res));
      (void)v;
    }
    return worst;
  };
  const double r1 = stencil_residual(0.2);
  const double r2 = stencil_residual(0.1);
  CHECK(r1 / std::max(r2, 1e-18) > 3.0);  // ~ O(dt^2): factor ~4 per halving
}

TEST_CASE("linear-regime scaling of the source") {
  // Scaling A by lambda scales u_app by lambda and v by lambda (1 + O(lambda));
  // compare a full-strength and a tenth-strength run.
  SmallRun big(-1.0);
  SmallRun small(-0.1);
  const BackwardRun rb = solve_backward(big.profile, big.wparams, big.spec);
  const BackwardRun rs = solve_backward(small.profile, small.wparams, small.spec);
  double peak_b = 0.0, peak_s = 0.0;
  for (double s : rb.sup_v) peak_b = std::max(peak_b, s);
  for (double s : rs.sup_v) peak_s = std::max(peak_s, s);
  REQUIRE(peak_b > 0.0);
  const double gain = peak_b / peak_s;
  CHECK(gain > 10.0 * (1.0 - 0.2));
  CHECK(gain < 10.0 * (1.0 + 0.2));
}

TEST_CASE("horizon compare: identical runs differ by zero") {
  SmallRun cfg(-1.0);
  const BackwardRun a = solve_backward(cfg.profile, cfg.wparams, cfg.spec);
  const HorizonCompareResult cmp = horizon_compare(a, a, 0.1, 0.1, cfg.wparams);
  CHECK(cmp.max_energy_diff == 0.0);
  CHECK(cmp.max_sup_diff == 0.0);
  CHECK_THROWS(horizon_compare(a, a, 0.7, 0.1, cfg.wparams));
}

TEST_CASE("horizon compare: zero data gives zero difference") {
  SmallRun cfg1(0.0);
  SmallRun cfg2(0.0);
  cfg2.spec.T = 80.0;
  SemilinearProfileTable profile2(cfg2.sol, cfg2.params, CutoffSpec{0.1}, 10.0, 160.0, 200.0);
  const BackwardRun r1 = solve_backward(cfg1.profile, cfg1.wparams, cfg1.spec);
  const BackwardRun r2 = solve_backward(profile2, cfg2.wparams, cfg2.spec);
  const HorizonCompareResult cmp = horizon_compare(r1, r2, 0.1, 0.1, cfg1.wparams);
  CHECK(cmp.max_energy_diff == 0.0);
}
