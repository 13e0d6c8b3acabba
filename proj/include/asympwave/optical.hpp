// Approximate optical function q(t,x): backward characteristics of
// q_t - q_r = mu(eps ln t - delta, q, w) from the data cone r = t/2, plus the
// transported outgoing derivative nu = q_t + q_r.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asympwave/fitting.hpp"
#include "asympwave/reduced.hpp"

namespace asympwave {

struct OpticalParams {
  double epsilon = 0.02;
  double delta = 0.5;

  double T_eps() const { return 1.0 / epsilon; }
  double slow_time(double t) const { return epsilon * std::log(t) - delta; }
  // mu must be defined down to s = -delta0 on the whole domain t >= 1/eps.
  void validate(double delta0) const;
};

// State of one characteristic foot point (t, r omega).
struct ConeSample {
  double t = 0.0;
  double r = 0.0;
  double q = 0.0;
  double nu = 0.0;
  double mu = 0.0;
  double q_t = 0.0;  // (mu + nu)/2
  double q_r = 0.0;  // (nu - mu)/2
};

// steps == 0 selects the adaptive integrator (relative accuracy ~1e-12);
// steps > 0 runs fixed RK4 and verifies the step-halving estimate < 1e-8.
double solve_q(double t, double r, const Direction& dir, const ReducedSolution& sol,
               const OpticalParams& params, int steps = 0);

ConeSample solve_q_nu(double t, double r, const Direction& dir, const ReducedSolution& sol,
                      const OpticalParams& params, int steps = 0);

double invert_r(double t, double q_target, const Direction& dir, const ReducedSolution& sol,
                const OpticalParams& params);

double transport_nu(double t, double r, const Direction& dir, const ReducedSolution& sol,
                    const OpticalParams& params, int steps = 0);

struct OpticalChart {
  std::vector<double> t_nodes;
  std::vector<std::vector<double>> r_nodes;            // per t-row
  std::vector<Direction> omega_nodes;
  // sheets[wi][ti][ri]
  std::vector<std::vector<std::vector<ConeSample>>> sheets;
  bool extended_inside = true;  // q = r - t for r < t/2
  bool radial = true;           // lambda_i == 0 on every sheet
  int solver_steps = 0;

  const ConeSample& at(int wi, int ti, int ri) const { return sheets[wi][ti][ri]; }
};

// Chart rows r = t + offset for every t node (clipped to r > t/2).
OpticalChart build_chart(const ReducedSolution& sol, const OpticalParams& params,
                         const std::vector<double>& t_nodes,
                         const std::vector<double>& r_offsets,
                         const std::vector<Direction>& omegas);

struct QDeviationReport {
  double max_normalized_deviation = 0.0;  // |q-(r-t)| / <max(0,-q)>^{1-gamma_minus}
  double deviation_slope_in_t = 0.0;      // log-log slope of the per-t envelope
  double ratio_C = 0.0;                   // max |ln(<q>/<r-t>)| / (eps ln(t+r))
  double worst_t = 0.0, worst_r = 0.0;
};

QDeviationReport q_deviation_report(const OpticalChart& chart, double gamma_minus,
                                    double epsilon);

// g^{ab}(eps r^-1 U, d(eps r^-1 U)) q_a q_b at one point.
double eikonal_residual(double t, double r, const Direction& dir, const ReducedSolution& sol,
                        const OpticalParams& params);

// Lemma-type remainder nu - (eps G2_J/(4r)) mu U^J + (eps G3_J/(8r)) mu^2 Uq^J;
// decays faster than nu itself.
double nu_remainder(double t, double r, const Direction& dir, const ReducedSolution& sol,
                    const OpticalParams& params);

}  // namespace asympwave
