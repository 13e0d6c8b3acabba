// The localized profile u_app = eps r^-1 psi(r/t) U(s, q, w), its
// finite-difference derivative tables, and the residual it leaves in the
// wave system.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "asympwave/fitting.hpp"
#include "asympwave/optical.hpp"

namespace asympwave {

struct CutoffSpec {
  double c = 0.1;  // in (0, 1/4): plateau on [1-c/2, 1+c/2], support (1-c, 1+c)

  void validate() const;
  // order 0..2; smooth exp(-1/x) transition, symmetric about x = 1.
  double psi(double x, int order = 0) const;
};

double cutoff_psi(double x, const CutoffSpec& spec, int order);

// Point evaluator for u_app. For mu == -2 families the optical function is
// r - t exactly; otherwise q comes from the adaptive characteristic solver.
class UappEvaluator {
 public:
  UappEvaluator(const ReducedSolution& sol, const OpticalParams& params, CutoffSpec spec);

  const ReducedSolution& solution() const { return *sol_; }
  const OpticalParams& params() const { return params_; }
  const CutoffSpec& cutoff() const { return spec_; }
  bool exact_q() const { return exact_q_; }

  double q_of(double t, double r, const Direction& dir) const;
  // u_app components; U is reconstructed from a fixed anchor so that values
  // across a finite-difference stencil share one smooth quadrature layout.
  std::vector<double> value(double t, double r, const Direction& dir) const;
  void set_q_anchor(double q) { q_anchor_ = q; }

 private:
  std::shared_ptr<const ReducedSolution> sol_;
  OpticalParams params_;
  CutoffSpec spec_;
  bool exact_q_ = false;
  double q_anchor_ = 0.0;

  double U_component(double s, double q, const Direction& dir, int I) const;
};

struct ProfileField {
  std::vector<double> t_nodes, r_nodes;
  Direction dir;
  int M = 1;
  // tables[ti][ri] -> M-vector
  std::vector<std::vector<std::vector<double>>> u, u_t, u_r, u_tt, u_tr, u_rr;
  std::string provenance;

  const std::vector<double>& at(int ti, int ri) const { return u[ti][ri]; }
};

// Tabulates u_app and centered-difference derivative tables on a uniform
// (t, r) grid (interior stencils only; edge rows are one-sided).
ProfileField build_profile_field(const UappEvaluator& eval, const std::vector<double>& t_nodes,
                                 const std::vector<double>& r_nodes, const Direction& dir);

struct WaveResidualSample {
  std::vector<double> residual;  // g^{ab} d_a d_b u - f, per component
  std::vector<double> piece_g;   // quasilinear piece
  std::vector<double> piece_f;   // semilinear piece
  double h = 0.0;                // accepted finite-difference step
};

// Radial evaluation: second derivatives by 4th-order central differences in
// (t, r) with step halving until the derivative tables stabilize.
WaveResidualSample wave_residual(double t, double r, const Direction& dir,
                                 const UappEvaluator& field,
                                 const WaveSystemCoefficients& coeffs);

struct HessianStructure {
  double deviation = 0.0;       // sup_{a,b} |H_ab - rank-one model|
  double model_scale = 0.0;     // |(eps/4r) psi mu d_q(mu Uq)|
  double singular_ratio = 0.0;  // second/first singular value of H
  double h = 0.0;
};

HessianStructure hessian_structure_check(double t, double r, const Direction& dir,
                                         const UappEvaluator& field);

// W(s,q) = int_{-inf}^q 2 (U_0 / mu)(s,p) dp for the gradient-coupled family;
// tail_bound reports the truncated mass below the quadrature window.
double w_antiderivative(const ReducedSolution& sol, double s, double q, const Direction& dir,
                        double* tail_bound = nullptr);

// Analytic derivative bundle of u_app for mu == -2 families, backed by
// cumulative (s, q) tables; used by the time stepper where per-point
// quadrature would be too slow.
class SemilinearProfileTable {
 public:
  SemilinearProfileTable(const ReducedSolution& sol, const OpticalParams& params,
                         CutoffSpec spec, double t_min, double t_max, double q_span);

  struct Bundle {
    double u = 0.0, u_t = 0.0, u_r = 0.0;
    double u_tt = 0.0, u_tr = 0.0, u_rr = 0.0;
    double box = 0.0;  // -u_tt + u_rr + (2/r) u_r
  };
  Bundle eval(double t, double r, const Direction& dir) const;
  double source_residual(double t, double r, const Direction& dir) const;  // Box u_app - (u_app_t)^2

 private:
  std::shared_ptr<const ReducedSolution> sol_;
  OpticalParams params_;
  CutoffSpec spec_;
  std::vector<double> s_nodes_, q_nodes_;
  // tables_[a][si][qi] = d_s^a U at (s_i, q_j), a = 0..2
  std::vector<std::vector<std::vector<double>>> tables_;
  double table(int a, double s, double q, const Direction& dir) const;
};

}  // namespace asympwave
