// Weighted energies on radial field snapshots and the associated
// Poincare-type ratio checks.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asympwave/optical.hpp"

namespace asympwave {

struct WeightParams {
  double gamma1 = 2.4;  // 2 < gamma1 < min{2(gamma_minus - 1), 4}
  double gamma2 = 0.2;  // 0 < gamma2 < min{gamma_minus - 2, gamma_plus - 1, 1/2}
  double c0 = 4.0;      // >= 2
  double epsilon = 0.02;
  double delta = 0.5;

  void validate(double gamma_plus, double gamma_minus) const;
};

enum class WeightKind { m, sigma, w, w0 };

double weight_eval(double t, double q, const WeightParams& params, WeightKind which);

struct FieldSnapshot {
  double t = 0.0;
  std::vector<double> r_nodes;  // strictly increasing from > 0
  std::vector<double> phi, phi_t, phi_r;
  bool compact_support = true;

  void validate() const;
};

// Smooth compactly supported radial test field near the light cone,
// deterministic in the seed.
FieldSnapshot random_snapshot(std::uint64_t seed, double t, double half_width = 20.0,
                              int n_nodes = 2001);

// E_u = 4 pi int w (-2 g^{0a} phi_t phi_a + g^{ab} phi_a phi_b) r^2 dr.
// For radial fields the density reduces to (-g^00) phi_t^2 + g^ww phi_r^2
// with g^ww = g^{ij} w_i w_j; a non-coercive form throws.
double energy_Eu(const FieldSnapshot& snap, const std::vector<Metric4>& metric_per_node,
                 const Direction& dir, const std::vector<double>& q_per_node,
                 const WeightParams& params,
                 const std::vector<double>* weight_override = nullptr);

// E_q = 4 pi int coef(q) |q_t|^-1 sum_a |(q_t d_a - q_a d_t) phi|^2 w r^2 dr,
// coef(q) = (1-q)^{-1} 1_{q<0} + eps ln(1/eps) (1+|q|)^{-1-gamma2}.
double energy_Eq(const FieldSnapshot& snap, const std::vector<ConeSample>& cone_per_node,
                 const WeightParams& params);

enum class PoincareVariant { lp1, lp1st, lp2 };

struct PoincareResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // 0 when both sides vanish
};

// lp1 needs t >= 100 (eta+1)^2 / eta^2, lp1st needs t below that threshold,
// lp2 needs cone samples (for q, q_r) and weight parameters.
PoincareResult poincare_ratio(const FieldSnapshot& snap, double eta, double c,
                              PoincareVariant variant,
                              const std::vector<ConeSample>* cone_per_node = nullptr,
                              const WeightParams* params = nullptr);

}  // namespace asympwave
