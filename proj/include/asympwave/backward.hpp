// Backward-in-time matching solve for the radial semilinear model
// Box u = (u_t)^2: v is evolved from v == 0 at t = 2T down to t_min with
// Box v = [(d_t(u_app+v))^2 - (d_t u_app)^2] - chi(t/T) [Box u_app - (d_t u_app)^2].
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asympwave/energy.hpp"
#include "asympwave/profile.hpp"

namespace asympwave {

struct ChiCutoff {
  // chi == 1 on |s| <= 1, chi == 0 on |s| >= 2, smooth monotone transition.
  double operator()(double s) const;
};

double chi_cutoff(double s);

struct BackwardGridSpec {
  double T = 200.0;
  double t_min = 50.0;
  double dr = 0.05;
  double cfl = 0.9;              // dt = cfl * dr
  double r_max = 0.0;            // 0: auto from the finite-speed envelope
  std::vector<double> snapshot_times;
  int energy_stride = 1;         // record the energy every k-th step
};

struct BackwardRun {
  double T = 0.0, t_min = 0.0, r_max = 0.0, dt = 0.0, dr = 0.0, cfl = 0.0;
  std::vector<double> r_nodes;

  std::vector<double> energy_times;
  std::vector<double> energy_w0;  // ||w0^{1/2} dv(t)||_L2
  std::vector<double> sup_v;

  std::vector<double> snapshot_times;
  // per snapshot: v, v_t, v_r on r_nodes
  std::vector<std::vector<double>> v_snap, vt_snap, vr_snap;
  // three consecutive Phi = r v levels around each snapshot (for stencil
  // substitution checks), ordered earlier/center/later with their times.
  std::vector<std::array<std::vector<double>, 3>> phi_triples;
  std::vector<std::array<double, 3>> phi_triple_times;

  double support_margin_violation = 0.0;  // max |v| seen in the outer guard band
};

BackwardRun solve_backward(const SemilinearProfileTable& profile, const WeightParams& wparams,
                           const BackwardGridSpec& spec);

struct HorizonCompareResult {
  double max_energy_diff = 0.0;  // max_t ||w0^{1/2} d(v1-v2)(t)||
  double max_sup_diff = 0.0;
  double fitted_C = 0.0;  // against eps T1^{-1/2+lambda0} t^{-lambda0}
  std::vector<std::pair<double, double>> energy_diff_series;  // (t, diff)
};

HorizonCompareResult horizon_compare(const BackwardRun& run1, const BackwardRun& run2,
                                     double lambda0, double epsilon,
                                     const WeightParams& wparams);

}  // namespace asympwave
