// The reduced system in slow time s and retarded coordinate q:
//   d_s(mu Uq^I) = -(1/4) F2^I_JK mu^2 Uq^J Uq^K
//   d_s mu       =  (1/4) G2_J  mu^2 Uq^J - (1/8) G3_J mu^2 d_q(mu Uq^J)
// with closed-form solution families and a method-of-lines integrator.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asympwave/model.hpp"
#include "asympwave/scattering.hpp"

namespace asympwave {

enum class ReducedKind { closed_semilinear, closed_quasilinear_grad, closed_euler, numeric };

const char* to_string(ReducedKind kind);

// A global-in-s solution (mu, U) with analytic partial derivatives.
// Partial orders: a in s, b in q, with a + b <= 3 for mu and Uq, a <= 2 for U.
struct ReducedSolution {
  ReducedKind kind = ReducedKind::numeric;
  int M = 1;
  double delta0 = 1.0;  // defined for s >= -delta0
  double s_min() const { return -delta0; }
  bool radial = true;
  ScatteringData data;
  std::shared_ptr<const WaveSystemCoefficients> system;

  std::function<double(double s, double q, const Direction&, int a, int b)> mu_partial_fn;
  std::function<double(double s, double q, const Direction&, int I, int a, int b)> Uq_partial_fn;
  std::function<double(double s, double q, const Direction&, int I, int a)> U_partial_fn;

  double mu(double s, double q, const Direction& w) const { return mu_partial_fn(s, q, w, 0, 0); }
  double mu_partial(double s, double q, const Direction& w, int a, int b) const {
    return mu_partial_fn(s, q, w, a, b);
  }
  double Uq(double s, double q, const Direction& w, int I) const {
    return Uq_partial_fn(s, q, w, I, 0, 0);
  }
  double Uq_partial(double s, double q, const Direction& w, int I, int a, int b) const {
    return Uq_partial_fn(s, q, w, I, a, b);
  }
  double U(double s, double q, const Direction& w, int I) const {
    return U_partial_fn(s, q, w, I, 0);
  }
  double U_partial_s(double s, double q, const Direction& w, int I, int a) const {
    return U_partial_fn(s, q, w, I, a);
  }
  // Mixed omega derivative magnitude (central differences on the sphere; zero
  // for radial solutions). `which`: 0 = mu, 1 = Uq, 2 = U.
  double omega_derivative(int which, double s, double q, const Direction& w, int I, int a,
                          int b, int c) const;
};

struct ReducedGrid {
  struct Slice {
    std::vector<double> mu;                 // [q]
    std::vector<std::vector<double>> muUq;  // [I][q]
    std::vector<std::vector<double>> U;     // [I][q]
  };
  std::vector<double> s_nodes;
  std::vector<double> q_nodes;
  std::vector<Direction> omega_nodes;
  std::vector<std::vector<Slice>> values;  // [s][omega]
  int M = 1;

  void validate() const;
};

// Samples a solution onto a grid at a single s (seed for the integrator).
ReducedGrid sample_reduced(const ReducedSolution& sol, double s,
                           const std::vector<double>& q_nodes,
                           const std::vector<Direction>& omegas);

// One right-hand-side evaluation on a q-slice. d_q(mu Uq) uses 5-point
// finite-difference stencils (4th order inside, one-sided at the ends).
void reduced_rhs(const std::vector<double>& mu_slice,
                 const std::vector<std::vector<double>>& muUq_slices, const Direction& dir,
                 const AngularCoefficients& ang, const std::vector<double>& q_nodes,
                 std::vector<double>& dmu, std::vector<std::vector<double>>& dmuUq);

struct IntegrateResult {
  ReducedGrid trajectory;
  bool blow_up = false;
  double s_blowup = 0.0;
  // Sup difference against a half-step rerun (O(h^4) convergence probe).
  double half_step_diff = 0.0;
};

IntegrateResult integrate_reduced(const WaveSystemCoefficients& system, const ReducedGrid& init,
                                  double s_span, int steps, bool convergence_probe = true);

// Closed-form families. F and G are angular factors; cs1 = c_s'(0).
ReducedSolution closed_form_semilinear(const ScatteringData& A,
                                       const std::function<double(const Direction&)>& F);
ReducedSolution closed_form_quasilinear_grad(const ScatteringData& A,
                                             const std::function<double(const Direction&)>& G);
ReducedSolution closed_form_euler(const ScatteringData& A, double cs1);

// Blow-up time of the scalar asymptotic models on a sample grid.
//   burgers: (2 d_s + V d_q)V = 0, shock at inf -2/V0'(q) over V0' < 0.
//   riccati: 2 d_s V = F V^2, blow-up at min 2/(F V0) over F V0 > 0.
enum class HormanderFamily { burgers, riccati };
double hormander_shock_time(const std::function<double(double q, int deriv)>& V0,
                            HormanderFamily family, double F, double q_lo, double q_hi,
                            int n_nodes = 4096, double slope_tol = 1e-10);

// Sup-norm violations of the family's algebraic constraints on a grid.
std::map<std::string, double> constraint_residual(const ReducedSolution& sol,
                                                  const ReducedGrid& grid);

}  // namespace asympwave
