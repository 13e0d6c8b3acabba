// Numerical certification of the pointwise decay/growth envelopes that a
// reduced-system solution must satisfy (bounds 3.3-3.10 in the report).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asympwave/reduced.hpp"

namespace asympwave {

struct AdmissibilityGrid {
  std::vector<double> s_nodes;
  std::vector<double> q_nodes;
  std::vector<Direction> omega_nodes;

  // s in [-delta0, s_max], q in [-q_span, q_span]; one direction if radial.
  static AdmissibilityGrid standard(const ReducedSolution& sol, double s_max = 10.0,
                                    double q_span = 12.0, int n_s = 64, int n_q = 512,
                                    int n_omega = 8);
  AdmissibilityGrid refined() const;  // doubled resolution and doubled q-range
};

struct BoundRecord {
  std::string bound_id;  // "3.3" .. "3.10"
  double fitted_C = 0.0;
  double margin = 0.0;  // relative change of fitted_C under grid refinement
  double worst_s = 0.0;
  double worst_q = 0.0;
  Direction worst_omega;
  bool finite = true;
  bool stable = true;  // margin below the stability threshold
};

struct AdmissibilityReport {
  std::vector<BoundRecord> bounds;
  bool pass = false;  // every bound finite and refinement-stable
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  int max_order = 2;
  double stability_threshold = 0.05;
  // Any finite-range check of exp(Cs) envelopes is necessary, not sufficient.
  std::string caveat =
      "fitted constants certify the sampled range only; the growth envelopes "
      "are global-in-s claims";

  const BoundRecord* find(const std::string& id) const;
};

AdmissibilityReport check_admissible(const ReducedSolution& sol, double gamma_plus,
                                     double gamma_minus, const AdmissibilityGrid& grid,
                                     int max_order = 2);

struct IntegralInequalityResult {
  double max_ratio = 0.0;
  double worst_q = 0.0;
};

// max over q samples of int_{-inf}^q <p>^{-gamma_sgn(p)} dp, normalized by
// <max(0,-q)>^{1-gamma_minus}.
IntegralInequalityResult integral_inequality_check(double gamma_plus, double gamma_minus,
                                                   const std::vector<double>& q_samples);

}  // namespace asympwave
