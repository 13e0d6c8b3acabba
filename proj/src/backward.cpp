#include "asympwave/backward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asympwave {

namespace {
double sigma_bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
double smoothstep01(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = sigma_bump(u), b = sigma_bump(1.0 - u);
  return a / (a + b);
}
}  // namespace

double ChiCutoff::operator()(double s) const {
  const double a = std::fabs(s);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  return smoothstep01(2.0 - a);
}

double chi_cutoff(double s) { return ChiCutoff{}(s); }

BackwardRun solve_backward(const SemilinearProfileTable& profile, const WeightParams& wparams,
                           const BackwardGridSpec& spec) {
  if (!(spec.T > spec.t_min) || !(spec.t_min > 0.0))
    throw std::invalid_argument("solve_backward: need T > t_min > 0");
  if (!(spec.cfl > 0.0 && spec.cfl <= 0.9))
    throw std::invalid_argument("solve_backward: CFL ratio must lie in (0, 0.9]");
  const double c = 0.1;  // cutoff width of u_app; sets the support envelope
  const double t_top = 2.0 * spec.T;
  double r_max = spec.r_max;
  const double r_needed = (1.0 + c) * t_top + (t_top - spec.t_min) + 10.0 * spec.dr;
  if (r_max <= 0.0) r_max = r_needed;
  if (r_max < r_needed)
    throw std::invalid_argument("solve_backward: r_max below the finite-speed envelope");

  const int n = static_cast<int>(std::ceil(r_max / spec.dr)) + 1;
  const int steps = static_cast<int>(std::ceil((t_top - spec.t_min) / (spec.cfl * spec.dr)));
  const double dt = (t_top - spec.t_min) / steps;

  BackwardRun run;
  run.T = spec.T;
  run.t_min = spec.t_min;
  run.r_max = (n - 1) * spec.dr;
  run.dr = spec.dr;
  run.dt = dt;
  run.cfl = dt / spec.dr;
  run.r_nodes = linspace(0.0, run.r_max, n);
  run.snapshot_times = spec.snapshot_times;
  std::sort(run.snapshot_times.begin(), run.snapshot_times.end(),
            [](double a, double b) { return a > b; });

  const Direction dir;
  const ChiCutoff chi;
  const double eps = wparams.epsilon;

  // Phi = r v; phi_next is the later time level (t + dt).
  std::vector<double> phi_next(n, 0.0), phi(n, 0.0), phi_prev(n, 0.0);
  std::vector<double> uapp_t_row(n, 0.0), forcing_row(n, 0.0);

  auto record_energy = [&](double t, const std::vector<double>& p_prev,
                           const std::vector<double>& p_mid,
                           const std::vector<double>& p_next) -> double {
    double acc = 0.0, sup = 0.0;
    for (int j = 1; j < n - 1; ++j) {
      const double r = run.r_nodes[j];
      const double v = p_mid[j] / r;
      const double vt = (p_next[j] - p_prev[j]) / (2.0 * dt) / r;
      const double vr = (p_mid[j + 1] - p_mid[j - 1]) / (2.0 * spec.dr) / r - p_mid[j] / (r * r);
      const double w0 = weight_eval(t, r - t, wparams, WeightKind::w0);
      acc += w0 * (vt * vt + vr * vr) * r * r;
      sup = std::max(sup, std::fabs(v));
    }
    run.energy_times.push_back(t);
    run.energy_w0.push_back(std::sqrt(4.0 * M_PI * acc * spec.dr));
    run.sup_v.push_back(sup);
    return sup;
  };

  size_t next_snapshot = 0;
  const double lam2 = (dt * dt) / (spec.dr * spec.dr);
  const int guard_lo = std::max(1, n - 12);

  for (int step = 0; step < steps; ++step) {
    const double t = t_top - step * dt;  // level of `phi`

    // Source row pieces that do not involve the unknown level.
    const double chi_val = chi(t / spec.T);
    for (int j = 1; j < n - 1; ++j) {
      const double r = run.r_nodes[j];
      const auto b = profile.eval(t, r, dir);
      uapp_t_row[j] = b.u_t;
      forcing_row[j] = chi_val == 0.0 ? 0.0 : chi_val * (b.box - b.u_t * b.u_t);
    }

    // Phi = r v solves Phi_tt = Phi_rr - r * S with
    // S = [(u_t + v_t)^2 - u_t^2] - chi (Box u_app - u_t^2).
    for (int j = 1; j < n - 1; ++j) {
      const double r = run.r_nodes[j];
      const double lap = lam2 * (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]);
      const double base = 2.0 * phi[j] - phi_next[j] + lap + dt * dt * r * forcing_row[j];
      // v_t enters the source quadratically; solve the per-node fixed point
      // (the coupling is O(dt * eps), a few sweeps reach roundoff).
      double x = base;
      for (int it = 0; it < 3; ++it) {
        const double vt = (phi_next[j] - x) / (2.0 * dt * r);
        x = base - dt * dt * r * (vt * vt + 2.0 * uapp_t_row[j] * vt);
      }
      phi_prev[j] = x;
    }
    phi_prev[0] = 0.0;
    phi_prev[n - 1] = 0.0;

    // The centered triple (phi_prev, phi, phi_next) brackets the level t.
    const double t_new = t - dt;
    const bool record = (step % std::max(1, spec.energy_stride)) == 0 || step == steps - 1;
    if (record) {
      const double sup = record_energy(t, phi_prev, phi, phi_next);
      if (sup > 1e3 * eps)
        throw std::runtime_error("solve_backward: |v| exceeded 1e3 * eps at t = " +
                                 std::to_string(t));
    }
    for (int j = guard_lo; j < n; ++j)
      run.support_margin_violation = std::max(
          run.support_margin_violation, std::fabs(phi[j] / std::max(run.r_nodes[j], 1.0)));

    // Snapshot when the new mid level crosses the requested time.
    while (next_snapshot < run.snapshot_times.size() &&
           t_new <= run.snapshot_times[next_snapshot] + 0.5 * dt) {
      std::vector<double> v(n, 0.0), vt(n, 0.0), vr(n, 0.0);
      for (int j = 1; j < n - 1; ++j) {
        const double r = run.r_nodes[j];
        v[j] = phi[j] / r;
        vt[j] = (phi_next[j] - phi_prev[j]) / (2.0 * dt) / r;
        vr[j] = (phi[j + 1] - phi[j - 1]) / (2.0 * spec.dr) / r - phi[j] / (r * r);
      }
      run.v_snap.push_back(std::move(v));
      run.vt_snap.push_back(std::move(vt));
      run.vr_snap.push_back(std::move(vr));
      run.phi_triples.push_back({phi_prev, phi, phi_next});
      run.phi_triple_times.push_back({t_new, t, t + dt});
      run.snapshot_times[next_snapshot] = t;  // actual time of the stored level
      ++next_snapshot;
    }

    std::swap(phi_next, phi);
    std::swap(phi, phi_prev);
    // phi_prev now holds scratch for the next sweep.
  }
  run.snapshot_times.resize(run.v_snap.size());
  std::reverse(run.energy_times.begin(), run.energy_times.end());
  std::reverse(run.energy_w0.begin(), run.energy_w0.end());
  std::reverse(run.sup_v.begin(), run.sup_v.end());
  return run;
}

HorizonCompareResult horizon_compare(const BackwardRun& run1, const BackwardRun& run2,
                                     double lambda0, double epsilon,
                                     const WeightParams& wparams) {
  if (!(lambda0 > 0.0 && lambda0 < 0.5))
    throw std::invalid_argument("horizon_compare: lambda0 must lie in (0, 1/2)");
  if (std::fabs(run1.dr - run2.dr) > 1e-12)
    throw std::invalid_argument("horizon_compare: runs must share the radial grid step");
  const size_t n = std::min(run1.r_nodes.size(), run2.r_nodes.size());

  HorizonCompareResult out;
  for (size_t k1 = 0; k1 < run1.snapshot_times.size(); ++k1) {
    const double t = run1.snapshot_times[k1];
    // Find the matching snapshot of run2.
    size_t k2 = run2.snapshot_times.size();
    for (size_t k = 0; k < run2.snapshot_times.size(); ++k)
      if (std::fabs(run2.snapshot_times[k] - t) <= std::max(run1.dt, run2.dt)) k2 = k;
    if (k2 == run2.snapshot_times.size()) continue;

    double acc = 0.0, sup = 0.0;
    for (size_t j = 1; j + 1 < n; ++j) {
      const double r = run1.r_nodes[j];
      const double dvt = run1.vt_snap[k1][j] - run2.vt_snap[k2][j];
      const double dvr = run1.vr_snap[k1][j] - run2.vr_snap[k2][j];
      const double dv = run1.v_snap[k1][j] - run2.v_snap[k2][j];
      const double w0 = weight_eval(t, r - t, wparams, WeightKind::w0);
      acc += w0 * (dvt * dvt + dvr * dvr) * r * r;
      sup = std::max(sup, std::fabs(dv));
    }
    const double diff = std::sqrt(4.0 * M_PI * acc * run1.dr);
    out.energy_diff_series.emplace_back(t, diff);
    out.max_energy_diff = std::max(out.max_energy_diff, diff);
    out.max_sup_diff = std::max(out.max_sup_diff, sup);
    const double envelope =
        epsilon * std::pow(run1.T, -0.5 + lambda0) * std::pow(t, -lambda0);
    out.fitted_C = std::max(out.fitted_C, diff / envelope);
  }
  return out;
}

}  // namespace asympwave
