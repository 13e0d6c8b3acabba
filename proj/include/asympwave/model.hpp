// Quasilinear wave systems g^{ab}(u,du) d_a d_b u^I = f^I(u,du), represented
// by their quadratic Taylor data plus exact metric/source closures.
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "asympwave/numerics.hpp"

namespace asympwave {

// Spacetime index convention: 0 = time, 1..3 spatial.
using Metric4 = std::array<std::array<double, 4>, 4>;

inline Metric4 minkowski() {
  Metric4 m{};
  m[0][0] = -1.0;
  m[1][1] = m[2][2] = m[3][3] = 1.0;
  return m;
}

// Unit direction on the sphere together with the null covector (-1, w).
struct Direction {
  std::array<double, 3> omega{0.0, 0.0, 1.0};

  static Direction from(double x, double y, double z);
  std::array<double, 4> omega_hat() const { return {-1.0, omega[0], omega[1], omega[2]}; }
  bool valid(double tol = 1e-12) const;
};

// Axis directions plus a deterministic Fibonacci covering of the sphere.
std::vector<Direction> direction_grid(int n_extra);

struct WaveSystemCoefficients {
  int M = 1;
  std::string name;

  // g_lin[J][a][b]:   coefficient of u^J in g^{ab}.
  // g_grad[J][a][b][l]: coefficient of d_l u^J in g^{ab}.
  // f_quad[I][J][K][a][b]: coefficient of d_a u^J d_b u^K in f^I.
  std::vector<Metric4> g_lin;
  std::vector<std::array<Metric4, 4>> g_grad;
  std::vector<std::vector<std::vector<Metric4>>> f_quad;

  // Exact closures. u has M entries; du is indexed du[J][alpha] = d_alpha u^J.
  std::function<Metric4(const std::vector<double>& u,
                        const std::vector<std::array<double, 4>>& du)>
      metric_closure;
  std::function<std::vector<double>(const std::vector<double>& u,
                                    const std::vector<std::array<double, 4>>& du)>
      source_closure;

  void resize(int m);
  void symmetrize();  // enforce (a,b) symmetry of g_lin and g_grad
};

struct AngularCoefficients {
  std::vector<double> G2;                            // [J]
  std::vector<double> G3;                            // [J]
  std::vector<std::vector<std::vector<double>>> F2;  // [I][J][K]
};

AngularCoefficients angular_coefficients(const WaveSystemCoefficients& coeffs,
                                         const Direction& dir);

struct NullStructureReport {
  double max_G2 = 0.0;
  double max_G3 = 0.0;
  double max_F2 = 0.0;
  std::string classification;  // "null" or "non-null"
};

NullStructureReport null_structure_report(const WaveSystemCoefficients& coeffs,
                                          const std::vector<Direction>& directions,
                                          double tol = 1e-12);

// Builtin systems:
//   semilinear_ut2:   Box u = (u_t)^2, M = 1.
//   quasilinear_grad: Box v_s - v_0 Lap v_s = (1/2)(d_s v_0 + d_t v_s) d_t v_0,
//                     M = 4 (the differentiated form of Box u = u_t u_tt).
//   euler:            irrotational compressible Euler as covariant wave
//                     equations for (rho-log, velocity), M = 4; needs cs1 =
//                     c_s'(0). The closure uses the sound speed profile
//                     c_s(x) = 1 + cs1 * x.
WaveSystemCoefficients builtin_system(const std::string& name, double cs1 = 0.0);

}  // namespace asympwave
