#include "asympwave/model.hpp"

#include <cmath>
#include <stdexcept>

namespace asympwave {

Direction Direction::from(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (n < 1e-300) throw std::invalid_argument("Direction::from: zero vector");
  return Direction{{x / n, y / n, z / n}};
}

bool Direction::valid(double tol) const {
  const double n2 = omega[0] * omega[0] + omega[1] * omega[1] + omega[2] * omega[2];
  return std::fabs(n2 - 1.0) <= 2.0 * tol;
}

std::vector<Direction> direction_grid(int n_extra) {
  std::vector<Direction> dirs;
  for (int axis = 0; axis < 3; ++axis) {
    for (double sgn : {1.0, -1.0}) {
      std::array<double, 3> w{0.0, 0.0, 0.0};
      w[axis] = sgn;
      dirs.push_back(Direction{w});
    }
  }
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int k = 0; k < n_extra; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / n_extra;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * M_PI * k / golden;
    dirs.push_back(Direction{{rho * std::cos(phi), rho * std::sin(phi), z}});
  }
  return dirs;
}

void WaveSystemCoefficients::resize(int m) {
  M = m;
  g_lin.assign(m, Metric4{});
  g_grad.assign(m, std::array<Metric4, 4>{});
  f_quad.assign(m, std::vector<std::vector<Metric4>>(m, std::vector<Metric4>(m, Metric4{})));
}

void WaveSystemCoefficients::symmetrize() {
  for (int J = 0; J < M; ++J) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        const double s = 0.5 * (g_lin[J][a][b] + g_lin[J][b][a]);
        g_lin[J][a][b] = g_lin[J][b][a] = s;
        for (int l = 0; l < 4; ++l) {
          const double t = 0.5 * (g_grad[J][l][a][b] + g_grad[J][l][b][a]);
          g_grad[J][l][a][b] = g_grad[J][l][b][a] = t;
        }
      }
    }
  }
}

AngularCoefficients angular_coefficients(const WaveSystemCoefficients& coeffs,
                                         const Direction& dir) {
  if (!dir.valid()) throw std::invalid_argument("angular_coefficients: direction not unit length");
  const auto what = dir.omega_hat();
  AngularCoefficients ang;
  ang.G2.assign(coeffs.M, 0.0);
  ang.G3.assign(coeffs.M, 0.0);
  ang.F2.assign(coeffs.M,
                std::vector<std::vector<double>>(coeffs.M, std::vector<double>(coeffs.M, 0.0)));
  for (int J = 0; J < coeffs.M; ++J) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        ang.G2[J] += coeffs.g_lin[J][a][b] * what[a] * what[b];
        for (int l = 0; l < 4; ++l)
          ang.G3[J] += coeffs.g_grad[J][l][a][b] * what[a] * what[b] * what[l];
      }
    }
  }
  for (int I = 0; I < coeffs.M; ++I)
    for (int J = 0; J < coeffs.M; ++J)
      for (int K = 0; K < coeffs.M; ++K)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            ang.F2[I][J][K] += coeffs.f_quad[I][J][K][a][b] * what[a] * what[b];
  return ang;
}

NullStructureReport null_structure_report(const WaveSystemCoefficients& coeffs,
                                          const std::vector<Direction>& directions,
                                          double tol) {
  if (directions.empty())
    throw std::invalid_argument("null_structure_report: empty direction list");
  NullStructureReport rep;
  for (const Direction& dir : directions) {
    const AngularCoefficients ang = angular_coefficients(coeffs, dir);
    for (int J = 0; J < coeffs.M; ++J) {
      rep.max_G2 = std::max(rep.max_G2, std::fabs(ang.G2[J]));
      rep.max_G3 = std::max(rep.max_G3, std::fabs(ang.G3[J]));
    }
    for (int I = 0; I < coeffs.M; ++I)
      for (int J = 0; J < coeffs.M; ++J)
        for (int K = 0; K < coeffs.M; ++K)
          rep.max_F2 = std::max(rep.max_F2, std::fabs(ang.F2[I][J][K]));
  }
  const bool is_null = rep.max_G2 < tol && rep.max_G3 < tol && rep.max_F2 < tol;
  rep.classification = is_null ? "null" : "non-null";
  return rep;
}

namespace {

WaveSystemCoefficients make_semilinear_ut2() {
  WaveSystemCoefficients sys;
  sys.name = "semilinear_ut2";
  sys.resize(1);
  sys.f_quad[0][0][0][0][0] = 1.0;
  sys.metric_closure = [](const std::vector<double>&,
                          const std::vector<std::array<double, 4>>&) { return minkowski(); };
  sys.source_closure = [](const std::vector<double>&,
                          const std::vector<std::array<double, 4>>& du) {
    return std::vector<double>{du[0][0] * du[0][0]};
  };
  return sys;
}

WaveSystemCoefficients make_quasilinear_grad() {
  WaveSystemCoefficients sys;
  sys.name = "quasilinear_grad";
  sys.resize(4);
  for (int i = 1; i <= 3; ++i) sys.g_lin[0][i][i] = -1.0;
  for (int s = 0; s < 4; ++s) {
    sys.f_quad[s][0][0][s][0] += 0.5;  // (1/2) d_s v_0 * d_t v_0
    sys.f_quad[s][s][0][0][0] += 0.5;  // (1/2) d_t v_s * d_t v_0
  }
  sys.metric_closure = [](const std::vector<double>& u,
                          const std::vector<std::array<double, 4>>&) {
    Metric4 g = minkowski();
    for (int i = 1; i <= 3; ++i) g[i][i] = 1.0 - u[0];
    return g;
  };
  sys.source_closure = [](const std::vector<double>&,
                          const std::vector<std::array<double, 4>>& du) {
    std::vector<double> f(4);
    for (int s = 0; s < 4; ++s) f[s] = 0.5 * (du[0][s] + du[s][0]) * du[0][0];
    return f;
  };
  return sys;
}

// Inverse acoustical metric for unknowns u = (rho-log, velocity) and sound
// speed profile c_s(x) = 1 + cs1 * x.
Metric4 euler_metric(const std::vector<double>& u, double cs1) {
  const double cs = 1.0 + cs1 * u[0];
  Metric4 g{};
  g[0][0] = -1.0;
  for (int a = 1; a <= 3; ++a) {
    g[0][a] = g[a][0] = -u[a];
    for (int b = 1; b <= 3; ++b) g[a][b] = (a == b ? cs * cs : 0.0) - u[a] * u[b];
  }
  return g;
}

WaveSystemCoefficients make_euler(double cs1) {
  WaveSystemCoefficients sys;
  sys.name = "euler";
  sys.resize(4);
  for (int a = 1; a <= 3; ++a) {
    sys.g_lin[a][0][a] = sys.g_lin[a][a][0] = -1.0;
    sys.g_lin[0][a][a] = 2.0 * cs1;
  }
  const Metric4 mink = minkowski();
  for (int I = 0; I < 4; ++I) {
    for (int a = 1; a <= 3; ++a) {
      sys.f_quad[I][a][I][a][0] += 1.0;  // d_a u^a d_t u^I
      sys.f_quad[I][a][I][0][a] += 1.0;  // d_t u^a d_a u^I
      sys.f_quad[I][0][I][a][a] += -2.0 * cs1;
    }
    for (int a = 0; a < 4; ++a) sys.f_quad[I][0][I][a][a] += 3.0 * cs1 * mink[a][a];
  }
  for (int a = 1; a <= 3; ++a)
    for (int al = 0; al < 4; ++al)
      sys.f_quad[a][0][a][al][al] += -(1.0 + cs1) * mink[al][al];
  for (int al = 0; al < 4; ++al) sys.f_quad[0][0][0][al][al] += -3.0 * cs1 * mink[al][al];
  for (int a = 1; a <= 3; ++a) {
    for (int b = a + 1; b <= 3; ++b) {
      sys.f_quad[0][a][b][a][b] += 2.0;
      sys.f_quad[0][b][a][a][b] += -2.0;
    }
  }

  sys.metric_closure = [cs1](const std::vector<double>& u,
                             const std::vector<std::array<double, 4>>&) {
    return euler_metric(u, cs1);
  };
  sys.source_closure = [cs1](const std::vector<double>& u,
                             const std::vector<std::array<double, 4>>& du) {
    const Metric4 g = euler_metric(u, cs1);
    const double cs = 1.0 + cs1 * u[0];
    const double cs_ratio = cs1 / cs;  // c_s'/c_s

    // d_alpha g^{alpha beta} via the chain rule through u.
    std::array<double, 4> div_g{};
    for (int beta = 0; beta < 4; ++beta) {
      double acc = 0.0;
      for (int alpha = 1; alpha <= 3; ++alpha) {
        if (beta == 0) {
          acc += -du[alpha][alpha];  // d_a(-u^a)
        } else {
          // d_a g^{ab} = 2 c_s c_s' delta^{ab} d_a u^0 - d_a u^a u^b - u^a d_a u^b
          acc += 2.0 * cs * cs1 * (alpha == beta ? du[0][alpha] : 0.0);
          acc += -du[alpha][alpha] * u[beta] - u[alpha] * du[beta][alpha];
        }
      }
      if (beta != 0) acc += -du[beta][0];  // d_t g^{0b} = d_t(-u^b)
      div_g[beta] = acc;
    }

    // (1/2) g_{lm} d_alpha g^{lm} contracted with g^{alpha beta}: equals
    // 3 (c_s'/c_s) g^{alpha beta} d_alpha u^0 since sqrt|det g| = c_s^-3.
    std::array<double, 4> trace_term{};
    for (int beta = 0; beta < 4; ++beta) {
      double acc = 0.0;
      for (int alpha = 0; alpha < 4; ++alpha) acc += g[alpha][beta] * du[0][alpha];
      trace_term[beta] = 3.0 * cs_ratio * acc;
    }

    auto g_contract = [&g](const std::array<double, 4>& x, const std::array<double, 4>& y) {
      double acc = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) acc += g[a][b] * x[a] * y[b];
      return acc;
    };

    std::vector<double> f(4);
    for (int I = 0; I < 4; ++I) {
      double rhs;
      if (I == 0) {
        rhs = -3.0 * cs_ratio * g_contract(du[0], du[0]);
        for (int a = 1; a <= 3; ++a)
          for (int b = a + 1; b <= 3; ++b)
            rhs += 2.0 * (du[a][a] * du[b][b] - du[b][a] * du[a][b]);
      } else {
        rhs = -(1.0 + cs_ratio) * g_contract(du[0], du[I]);
      }
      double corr = 0.0;
      for (int beta = 0; beta < 4; ++beta)
        corr += (div_g[beta] - trace_term[beta]) * du[I][beta];
      f[I] = rhs - corr;
    }
    return f;
  };
  return sys;
}

}  // namespace

WaveSystemCoefficients builtin_system(const std::string& name, double cs1) {
  if (name == "semilinear_ut2") return make_semilinear_ut2();
  if (name == "quasilinear_grad") return make_quasilinear_grad();
  if (name == "euler") return make_euler(cs1);
  throw std::invalid_argument("builtin_system: unknown name '" + name + "'");
}

}  // namespace asympwave
