#include "asympwave/optical.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace asympwave {

void OpticalParams::validate(double delta0) const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("OpticalParams: epsilon must be positive");
  if (!(delta > 0.0 && delta < delta0))
    throw std::invalid_argument("OpticalParams: delta must lie in (0, delta0)");
  if (!(slow_time(T_eps()) > -delta0))
    throw std::invalid_argument("OpticalParams: eps ln(1/eps) - delta must exceed -delta0");
}

namespace {

void check_point(double t, double r, const OpticalParams& params) {
  if (!(t >= params.T_eps() * (1.0 - 1e-12)))
    throw std::domain_error("optical: t below 1/eps");
  if (!(r >= 0.5 * t * (1.0 - 1e-12))) throw std::domain_error("optical: r below t/2");
}

// Characteristic in deviation form: z(tau) = (r+t) - 2 tau + y(tau), so the
// Minkowski part is exact and y carries only the mu + 2 correction.
struct Characteristic {
  double t, b;  // b = r + t
  const ReducedSolution* sol;
  const Direction* dir;
  const OpticalParams* params;

  double tau0() const { return 2.0 * b / 3.0; }

  void rhs_q(double tau, const std::vector<double>& y, std::vector<double>& dy) const {
    const double s = params->slow_time(tau);
    const double z = b - 2.0 * tau + y[0];
    dy[0] = sol->mu(s, z, *dir) + 2.0;
  }

  void rhs_qnu(double tau, const std::vector<double>& y, std::vector<double>& dy) const {
    const double s = params->slow_time(tau);
    const double z = b - 2.0 * tau + y[0];
    dy[0] = sol->mu(s, z, *dir) + 2.0;
    dy[1] = sol->mu_partial(s, z, *dir, 0, 1) * y[1] +
            (params->epsilon / tau) * sol->mu_partial(s, z, *dir, 1, 0);
  }

  // Step cap: the scattering data lives in |z| <= cut, and z moves at speed
  // ~2 in tau; without the cap the error control can hop over the whole
  // support without noticing it.
  double step_cap(double tau, const std::vector<double>& y) const {
    const double z = b - 2.0 * tau + y[0];
    const double cut = sol->data.q_support_cut + 4.0;
    return std::max(0.25, (std::fabs(z) - cut) / 3.0);
  }
};

}  // namespace

double solve_q(double t, double r, const Direction& dir, const ReducedSolution& sol,
               const OpticalParams& params, int steps) {
  params.validate(sol.delta0);
  check_point(t, r, params);
  Characteristic ch{t, r + t, &sol, &dir, &params};
  std::vector<double> y{0.0};
  auto rhs = [&ch](double tau, const std::vector<double>& v, std::vector<double>& dv) {
    ch.rhs_q(tau, v, dv);
  };
  auto cap = [&ch](double tau, const std::vector<double>& v) { return ch.step_cap(tau, v); };
  if (steps <= 0) {
    rk4_adaptive(rhs, ch.tau0(), t, y, 1e-12, 1e-12, cap);
    return (r - t) + y[0];
  }
  std::vector<double> y2{0.0};
  rk4_fixed(rhs, ch.tau0(), t, steps, y);
  rk4_fixed(rhs, ch.tau0(), t, 2 * steps, y2);
  if (std::fabs(y2[0] - y[0]) > 1e-8 * bracket(y2[0] + r - t))
    throw std::runtime_error("solve_q: step count too small for the 1e-8 relative tolerance");
  return (r - t) + y2[0];
}

ConeSample solve_q_nu(double t, double r, const Direction& dir, const ReducedSolution& sol,
                      const OpticalParams& params, int steps) {
  params.validate(sol.delta0);
  check_point(t, r, params);
  Characteristic ch{t, r + t, &sol, &dir, &params};
  const double s0 = params.slow_time(ch.tau0());
  const double mu0 = sol.mu(s0, -(r + t) / 3.0, dir);
  std::vector<double> y{0.0, -(2.0 / 3.0) * (2.0 + mu0)};
  auto rhs = [&ch](double tau, const std::vector<double>& v, std::vector<double>& dv) {
    ch.rhs_qnu(tau, v, dv);
  };
  auto cap = [&ch](double tau, const std::vector<double>& v) { return ch.step_cap(tau, v); };
  if (steps <= 0) {
    rk4_adaptive(rhs, ch.tau0(), t, y, 1e-12, 1e-12, cap);
  } else {
    std::vector<double> y2 = y;
    rk4_fixed(rhs, ch.tau0(), t, steps, y);
    rk4_fixed(rhs, ch.tau0(), t, 2 * steps, y2);
    if (std::fabs(y2[0] - y[0]) > 1e-8 * bracket(y2[0] + r - t) ||
        std::fabs(y2[1] - y[1]) > 1e-8 * bracket(y2[1]))
      throw std::runtime_error("solve_q_nu: step count too small for the tolerance");
    y = y2;
  }
  ConeSample out;
  out.t = t;
  out.r = r;
  out.q = (r - t) + y[0];
  out.nu = y[1];
  out.mu = sol.mu(params.slow_time(t), out.q, dir);
  out.q_t = 0.5 * (out.mu + out.nu);
  out.q_r = 0.5 * (out.nu - out.mu);
  return out;
}

double transport_nu(double t, double r, const Direction& dir, const ReducedSolution& sol,
                    const OpticalParams& params, int steps) {
  return solve_q_nu(t, r, dir, sol, params, steps).nu;
}

double invert_r(double t, double q_target, const Direction& dir, const ReducedSolution& sol,
                const OpticalParams& params) {
  params.validate(sol.delta0);
  if (!(q_target >= -0.5 * t))
    throw std::domain_error("invert_r: q_target below -t/2 is outside the chart");
  auto f = [&](double r) { return solve_q(t, r, dir, sol, params) - q_target; };
  double lo = 0.5 * t, hi = 2.0 * t;
  double flo = f(lo), fhi = f(hi);
  int guard = 0;
  while (fhi < 0.0) {
    hi *= 2.0;
    fhi = f(hi);
    if (++guard > 48) {
      std::ostringstream msg;
      msg << "invert_r: bracket failure, last bounds [" << lo << ", " << hi << "]";
      throw std::runtime_error(msg.str());
    }
  }
  if (flo > 0.0) {
    // q(t, t/2) = -t/2 <= q_target, so this can only be roundoff.
    if (flo > 1e-9 * bracket(q_target)) {
      std::ostringstream msg;
      msg << "invert_r: bracket failure at the inner cone, f(t/2)=" << flo;
      throw std::runtime_error(msg.str());
    }
    return lo;
  }
  return bisect(f, lo, hi, 1e-10 * bracket(q_target));
}

OpticalChart build_chart(const ReducedSolution& sol, const OpticalParams& params,
                         const std::vector<double>& t_nodes,
                         const std::vector<double>& r_offsets,
                         const std::vector<Direction>& omegas) {
  OpticalChart chart;
  chart.t_nodes = t_nodes;
  chart.omega_nodes = omegas;
  chart.radial = sol.radial;
  chart.r_nodes.resize(t_nodes.size());
  for (size_t ti = 0; ti < t_nodes.size(); ++ti) {
    for (double off : r_offsets) {
      const double r = t_nodes[ti] + off;
      if (r > 0.5 * t_nodes[ti]) chart.r_nodes[ti].push_back(r);
    }
  }
  chart.sheets.assign(omegas.size(), {});
  for (size_t wi = 0; wi < omegas.size(); ++wi) {
    chart.sheets[wi].resize(t_nodes.size());
    for (size_t ti = 0; ti < t_nodes.size(); ++ti)
      chart.sheets[wi][ti].resize(chart.r_nodes[ti].size());
  }
  for (size_t wi = 0; wi < omegas.size(); ++wi) {
    for (size_t ti = 0; ti < t_nodes.size(); ++ti) {
      const auto& row = chart.r_nodes[ti];
      parallel_for(static_cast<int>(row.size()), [&](int ri) {
        chart.sheets[wi][ti][ri] =
            solve_q_nu(t_nodes[ti], row[ri], omegas[wi], sol, params);
      });
    }
  }
  return chart;
}

QDeviationReport q_deviation_report(const OpticalChart& chart, double gamma_minus,
                                    double epsilon) {
  QDeviationReport rep;
  std::vector<std::pair<double, double>> per_t_env;
  bool any = false;
  for (size_t wi = 0; wi < chart.omega_nodes.size(); ++wi) {
    for (size_t ti = 0; ti < chart.t_nodes.size(); ++ti) {
      const double t = chart.t_nodes[ti];
      double env = 0.0;
      for (size_t ri = 0; ri < chart.r_nodes[ti].size(); ++ri) {
        any = true;
        const ConeSample& smp = chart.at(static_cast<int>(wi), static_cast<int>(ti),
                                         static_cast<int>(ri));
        const double dev = std::fabs(smp.q - (smp.r - t));
        const double norm =
            std::pow(bracket(std::max(0.0, -smp.q)), 1.0 - gamma_minus);
        const double ratio = dev / norm;
        env = std::max(env, ratio);
        if (ratio > rep.max_normalized_deviation) {
          rep.max_normalized_deviation = ratio;
          rep.worst_t = t;
          rep.worst_r = smp.r;
        }
        const double two_sided =
            std::fabs(std::log(bracket(smp.q) / bracket(smp.r - t))) /
            std::max(epsilon * std::log(t + smp.r), 1e-300);
        rep.ratio_C = std::max(rep.ratio_C, two_sided);
      }
      if (env > 0.0 && wi == 0) per_t_env.emplace_back(t, env);
    }
  }
  if (!any) throw std::invalid_argument("q_deviation_report: empty chart");
  if (per_t_env.size() >= 5 &&
      per_t_env.back().first >= 4.0 * per_t_env.front().first) {
    rep.deviation_slope_in_t = fit_decay_exponent(per_t_env).exponent;
  }
  return rep;
}

namespace {

// eps r^-1 U and its first derivatives at a cone sample, exact via the chain
// rule through (s, q). Angular derivatives vanish on radial charts.
struct ProfileAtPoint {
  std::vector<double> u;
  std::vector<std::array<double, 4>> du;
};

ProfileAtPoint profile_point(const ConeSample& smp, const Direction& dir,
                             const ReducedSolution& sol, const OpticalParams& params) {
  const double s = params.slow_time(smp.t);
  const double eps = params.epsilon;
  ProfileAtPoint out;
  out.u.resize(sol.M);
  out.du.assign(sol.M, {});
  for (int I = 0; I < sol.M; ++I) {
    const double U = sol.U(s, smp.q, dir, I);
    const double Uq = sol.Uq(s, smp.q, dir, I);
    const double Us = sol.U_partial_s(s, smp.q, dir, I, 1);
    out.u[I] = eps / smp.r * U;
    const double ut = eps / smp.r * (Uq * smp.q_t + eps / smp.t * Us);
    const double ur = -eps / (smp.r * smp.r) * U + eps / smp.r * Uq * smp.q_r;
    out.du[I][0] = ut;
    for (int i = 1; i <= 3; ++i) out.du[I][i] = dir.omega[i - 1] * ur;
  }
  return out;
}

}  // namespace

double eikonal_residual(double t, double r, const Direction& dir, const ReducedSolution& sol,
                        const OpticalParams& params) {
  if (!(std::fabs(r - t) <= 0.5 * t))
    throw std::domain_error("eikonal_residual: point outside |r-t| <= t/2");
  const ConeSample smp = solve_q_nu(t, r, dir, sol, params);
  const ProfileAtPoint prof = profile_point(smp, dir, sol, params);
  const Metric4 g = sol.system ? sol.system->metric_closure(prof.u, prof.du) : minkowski();
  std::array<double, 4> dq{smp.q_t, dir.omega[0] * smp.q_r, dir.omega[1] * smp.q_r,
                           dir.omega[2] * smp.q_r};
  double acc = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) acc += g[a][b] * dq[a] * dq[b];
  return acc;
}

double nu_remainder(double t, double r, const Direction& dir, const ReducedSolution& sol,
                    const OpticalParams& params) {
  const ConeSample smp = solve_q_nu(t, r, dir, sol, params);
  const double s = params.slow_time(t);
  double acc = smp.nu;
  if (sol.system) {
    const AngularCoefficients ang = angular_coefficients(*sol.system, dir);
    for (int J = 0; J < sol.M; ++J) {
      acc -= params.epsilon * ang.G2[J] / (4.0 * r) * smp.mu * sol.U(s, smp.q, dir, J);
      acc += params.epsilon * ang.G3[J] / (8.0 * r) * smp.mu * smp.mu *
             sol.Uq(s, smp.q, dir, J);
    }
  }
  return acc;
}

}  // namespace asympwave
