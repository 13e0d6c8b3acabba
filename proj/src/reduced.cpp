#include "asympwave/reduced.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace asympwave {

const char* to_string(ReducedKind kind) {
  switch (kind) {
    case ReducedKind::closed_semilinear: return "closed_semilinear";
    case ReducedKind::closed_quasilinear_grad: return "closed_quasilinear_grad";
    case ReducedKind::closed_euler: return "closed_euler";
    default: return "numeric";
  }
}

namespace {

std::array<std::array<double, 3>, 2> tangent_basis(const Direction& w) {
  const auto& o = w.omega;
  std::array<double, 3> seed = std::fabs(o[2]) < 0.9 ? std::array<double, 3>{0, 0, 1}
                                                     : std::array<double, 3>{1, 0, 0};
  std::array<double, 3> e1{seed[1] * o[2] - seed[2] * o[1], seed[2] * o[0] - seed[0] * o[2],
                           seed[0] * o[1] - seed[1] * o[0]};
  double n = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (double& v : e1) v /= n;
  std::array<double, 3> e2{o[1] * e1[2] - o[2] * e1[1], o[2] * e1[0] - o[0] * e1[2],
                           o[0] * e1[1] - o[1] * e1[0]};
  return {e1, e2};
}

Direction rotate_towards(const Direction& w, const std::array<double, 3>& tang, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return Direction::from(c * w.omega[0] + s * tang[0], c * w.omega[1] + s * tang[1],
                         c * w.omega[2] + s * tang[2]);
}

}  // namespace

double ReducedSolution::omega_derivative(int which, double s, double q, const Direction& w,
                                         int I, int a, int b, int c) const {
  auto value = [&](const Direction& dir) {
    switch (which) {
      case 0: return mu_partial_fn(s, q, dir, a, b);
      case 1: return Uq_partial_fn(s, q, dir, I, a, b);
      default: return U_partial_fn(s, q, dir, I, a);
    }
  };
  if (c == 0) return value(w);
  if (radial) return 0.0;
  const double h = 1e-3;
  const auto basis = tangent_basis(w);
  double worst = 0.0;
  for (const auto& tang : basis) {
    std::array<double, 5> f;
    for (int k = -2; k <= 2; ++k) f[k + 2] = value(rotate_towards(w, tang, k * h));
    double d;
    if (c == 1) {
      d = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
    } else if (c == 2) {
      d = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
    } else {
      d = (-f[0] + 2.0 * f[1] - 2.0 * f[3] + f[4]) / (2.0 * h * h * h);
    }
    worst = std::max(worst, std::fabs(d));
  }
  return worst;
}

void ReducedGrid::validate() const {
  for (size_t i = 1; i < q_nodes.size(); ++i)
    if (!(q_nodes[i] > q_nodes[i - 1]))
      throw std::invalid_argument("ReducedGrid: q_nodes must be strictly increasing");
  for (size_t i = 1; i < s_nodes.size(); ++i)
    if (!(s_nodes[i] > s_nodes[i - 1]))
      throw std::invalid_argument("ReducedGrid: s_nodes must be strictly increasing");
  for (const auto& row : values)
    for (const auto& slice : row)
      for (double m : slice.mu)
        if (!(m < 0.0)) throw std::domain_error("ReducedGrid: mu must stay negative");
}

ReducedGrid sample_reduced(const ReducedSolution& sol, double s,
                           const std::vector<double>& q_nodes,
                           const std::vector<Direction>& omegas) {
  ReducedGrid grid;
  grid.M = sol.M;
  grid.s_nodes = {s};
  grid.q_nodes = q_nodes;
  grid.omega_nodes = omegas;
  grid.values.resize(1);
  for (const Direction& w : omegas) {
    ReducedGrid::Slice slice;
    slice.mu.resize(q_nodes.size());
    slice.muUq.assign(sol.M, std::vector<double>(q_nodes.size()));
    slice.U.assign(sol.M, std::vector<double>(q_nodes.size()));
    for (size_t j = 0; j < q_nodes.size(); ++j) {
      const double q = q_nodes[j];
      const double mu = sol.mu(s, q, w);
      slice.mu[j] = mu;
      for (int I = 0; I < sol.M; ++I) {
        slice.muUq[I][j] = mu * sol.Uq(s, q, w, I);
        slice.U[I][j] = sol.U(s, q, w, I);
      }
    }
    grid.values[0].push_back(std::move(slice));
  }
  return grid;
}

void reduced_rhs(const std::vector<double>& mu_slice,
                 const std::vector<std::vector<double>>& muUq_slices, const Direction& dir,
                 const AngularCoefficients& ang, const std::vector<double>& q_nodes,
                 std::vector<double>& dmu, std::vector<std::vector<double>>& dmuUq) {
  const size_t n = q_nodes.size();
  if (n < 5) throw std::invalid_argument("reduced_rhs: need at least 5 q-nodes");
  if (mu_slice.size() != n) throw std::invalid_argument("reduced_rhs: mu slice length mismatch");
  const int M = static_cast<int>(muUq_slices.size());
  for (const auto& s : muUq_slices)
    if (s.size() != n) throw std::invalid_argument("reduced_rhs: muUq slice length mismatch");
  if (!dir.valid()) throw std::invalid_argument("reduced_rhs: invalid direction");

  dmu.assign(n, 0.0);
  dmuUq.assign(M, std::vector<double>(n, 0.0));

  bool need_dq = false;
  for (int J = 0; J < M; ++J) need_dq = need_dq || ang.G3[J] != 0.0;
  std::vector<std::vector<double>> dq_muUq;
  if (need_dq) {
    dq_muUq.reserve(M);
    for (int J = 0; J < M; ++J) dq_muUq.push_back(fd_derivative(q_nodes, muUq_slices[J]));
  } else {
    // validate monotonicity even when the derivative is unused
    for (size_t i = 1; i < n; ++i)
      if (!(q_nodes[i] > q_nodes[i - 1]))
        throw std::invalid_argument("reduced_rhs: q_nodes must be strictly increasing");
  }

  for (size_t j = 0; j < n; ++j) {
    const double mu = mu_slice[j];
    for (int I = 0; I < M; ++I) {
      double acc = 0.0;
      for (int J = 0; J < M; ++J)
        for (int K = 0; K < M; ++K)
          acc += ang.F2[I][J][K] * muUq_slices[J][j] * muUq_slices[K][j];
      dmuUq[I][j] = -0.25 * acc;  // mu^2 Uq Uq = (mu Uq)(mu Uq)
    }
    double g2 = 0.0, g3 = 0.0;
    for (int J = 0; J < M; ++J) {
      g2 += ang.G2[J] * mu * muUq_slices[J][j];
      if (need_dq) g3 += ang.G3[J] * mu * mu * dq_muUq[J][j];
    }
    dmu[j] = 0.25 * g2 - 0.125 * g3;
  }
}

namespace {

struct StepperState {
  std::vector<double> mu;
  std::vector<std::vector<double>> muUq;
};

bool state_ok(const StepperState& st) {
  for (double m : st.mu)
    if (!std::isfinite(m) || m >= 0.0 || std::fabs(m) > 1e10) return false;
  for (const auto& row : st.muUq)
    for (double v : row)
      if (!std::isfinite(v) || std::fabs(v) > 1e10) return false;
  return true;
}

void axpy_state(StepperState& out, const StepperState& a, double c, const StepperState& b) {
  const size_t n = a.mu.size();
  out.mu.resize(n);
  out.muUq.assign(a.muUq.size(), std::vector<double>(n));
  for (size_t j = 0; j < n; ++j) out.mu[j] = a.mu[j] + c * b.mu[j];
  for (size_t I = 0; I < a.muUq.size(); ++I)
    for (size_t j = 0; j < n; ++j) out.muUq[I][j] = a.muUq[I][j] + c * b.muUq[I][j];
}

// One classical RK4 step of the reduced system on a q-slice.
bool rk4_reduced_step(StepperState& st, double h, const Direction& dir,
                      const AngularCoefficients& ang, const std::vector<double>& q_nodes) {
  StepperState k1, k2, k3, k4, tmp;
  auto eval = [&](const StepperState& in, StepperState& out) {
    reduced_rhs(in.mu, in.muUq, dir, ang, q_nodes, out.mu, out.muUq);
  };
  eval(st, k1);
  axpy_state(tmp, st, 0.5 * h, k1);
  eval(tmp, k2);
  axpy_state(tmp, st, 0.5 * h, k2);
  eval(tmp, k3);
  axpy_state(tmp, st, h, k3);
  eval(tmp, k4);
  const size_t n = st.mu.size();
  for (size_t j = 0; j < n; ++j)
    st.mu[j] += (h / 6.0) * (k1.mu[j] + 2.0 * k2.mu[j] + 2.0 * k3.mu[j] + k4.mu[j]);
  for (size_t I = 0; I < st.muUq.size(); ++I)
    for (size_t j = 0; j < n; ++j)
      st.muUq[I][j] +=
          (h / 6.0) * (k1.muUq[I][j] + 2.0 * k2.muUq[I][j] + 2.0 * k3.muUq[I][j] + k4.muUq[I][j]);
  return state_ok(st);
}

// Cumulative integral from q_nodes[0] on a uniform grid: telescoping Simpson
// pairs on the even offsets, a local 3-point rule for the odd ones (globally
// 4th order at every node).
std::vector<double> cumulative_integral(const std::vector<double>& q_nodes,
                                        const std::vector<double>& f) {
  const size_t n = q_nodes.size();
  std::vector<double> out(n, 0.0);
  const double h = q_nodes[1] - q_nodes[0];
  bool uniform = true;
  for (size_t j = 1; j + 1 < n; ++j)
    if (std::fabs((q_nodes[j + 1] - q_nodes[j]) - h) > 1e-9 * std::fabs(h)) uniform = false;
  if (!uniform) {
    for (size_t j = 1; j < n; ++j)
      out[j] = out[j - 1] + 0.5 * (q_nodes[j] - q_nodes[j - 1]) * (f[j] + f[j - 1]);
    return out;
  }
  for (size_t j = 2; j < n; j += 2)
    out[j] = out[j - 2] + (h / 3.0) * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
  for (size_t j = 1; j < n; j += 2) {
    if (j + 1 < n)
      out[j] = out[j - 1] + (h / 12.0) * (5.0 * f[j - 1] + 8.0 * f[j] - f[j + 1]);
    else
      out[j] = out[j - 1] + (h / 12.0) * (-f[j - 2] + 8.0 * f[j - 1] + 5.0 * f[j]);
  }
  return out;
}

ReducedGrid run_reduced(const WaveSystemCoefficients& system, const ReducedGrid& init,
                        double s_span, int steps, bool* blew_up, double* s_blowup) {
  init.validate();
  if (init.s_nodes.size() != 1)
    throw std::invalid_argument("integrate_reduced: init must hold exactly one s slice");
  if (steps < 8) throw std::invalid_argument("integrate_reduced: steps must be >= 8");

  const double s0 = init.s_nodes[0];
  const double h = s_span / steps;
  const size_t n_omega = init.omega_nodes.size();

  ReducedGrid traj;
  traj.M = init.M;
  traj.q_nodes = init.q_nodes;
  traj.omega_nodes = init.omega_nodes;
  traj.s_nodes.resize(steps + 1);
  for (int k = 0; k <= steps; ++k) traj.s_nodes[k] = s0 + h * k;
  traj.values.assign(steps + 1, {});

  *blew_up = false;
  *s_blowup = 0.0;
  std::vector<int> stopped(n_omega, steps);
  std::vector<std::vector<ReducedGrid::Slice>> per_omega(n_omega);

  parallel_for(static_cast<int>(n_omega), [&](int wi) {
    const Direction& dir = init.omega_nodes[wi];
    const AngularCoefficients ang = angular_coefficients(system, dir);
    StepperState st{init.values[0][wi].mu, init.values[0][wi].muUq};
    auto record = [&](const StepperState& s_in) {
      ReducedGrid::Slice slice;
      slice.mu = s_in.mu;
      slice.muUq = s_in.muUq;
      slice.U.assign(init.M, {});
      std::vector<double> uq(init.q_nodes.size());
      for (int I = 0; I < init.M; ++I) {
        for (size_t j = 0; j < uq.size(); ++j) uq[j] = s_in.muUq[I][j] / s_in.mu[j];
        slice.U[I] = cumulative_integral(init.q_nodes, uq);
      }
      per_omega[wi].push_back(std::move(slice));
    };
    record(st);
    for (int k = 0; k < steps; ++k) {
      if (!rk4_reduced_step(st, h, dir, ang, init.q_nodes)) {
        stopped[wi] = k;
        return;
      }
      record(st);
    }
  });

  int first_stop = steps;
  for (size_t wi = 0; wi < n_omega; ++wi) first_stop = std::min(first_stop, stopped[wi]);
  if (first_stop < steps) {
    *blew_up = true;
    *s_blowup = s0 + h * (first_stop + 0.5);
    traj.s_nodes.resize(first_stop + 1);
    traj.values.resize(first_stop + 1);
  }
  for (size_t k = 0; k < traj.s_nodes.size(); ++k) {
    traj.values[k].resize(n_omega);
    for (size_t wi = 0; wi < n_omega; ++wi) traj.values[k][wi] = per_omega[wi][k];
  }
  return traj;
}

}  // namespace

IntegrateResult integrate_reduced(const WaveSystemCoefficients& system, const ReducedGrid& init,
                                  double s_span, int steps, bool convergence_probe) {
  IntegrateResult res;
  res.trajectory = run_reduced(system, init, s_span, steps, &res.blow_up, &res.s_blowup);
  if (convergence_probe && !res.blow_up && steps % 2 == 0) {
    bool blew = false;
    double s_b = 0.0;
    const ReducedGrid half = run_reduced(system, init, s_span, steps / 2, &blew, &s_b);
    if (!blew) {
      double diff = 0.0;
      const auto& fine = res.trajectory;
      for (size_t k = 0; k < half.s_nodes.size(); ++k) {
        const size_t kf = 2 * k;
        for (size_t wi = 0; wi < half.omega_nodes.size(); ++wi) {
          for (size_t j = 0; j < half.q_nodes.size(); ++j)
            diff = std::max(diff, std::fabs(half.values[k][wi].mu[j] - fine.values[kf][wi].mu[j]));
          for (int I = 0; I < half.M; ++I)
            for (size_t j = 0; j < half.q_nodes.size(); ++j)
              diff = std::max(diff, std::fabs(half.values[k][wi].muUq[I][j] -
                                              fine.values[kf][wi].muUq[I][j]));
        }
      }
      res.half_step_diff = diff;
    }
  }
  return res;
}

namespace {

void check_sign_condition(const ScatteringData& A,
                          const std::function<double(const Direction&)>& factor,
                          bool require_nonpositive, const char* family) {
  const std::vector<double> qs = linspace(-2.0 * A.q_support_cut, 2.0 * A.q_support_cut, 801);
  std::vector<Direction> dirs = A.radial ? std::vector<Direction>{Direction{}} : direction_grid(32);
  for (const Direction& w : dirs) {
    const double fac = factor(w);
    for (double q : qs) {
      const double v = fac * A(q, w);
      const bool bad = require_nonpositive ? v > 1e-14 : v < -1e-14;
      if (bad) {
        std::ostringstream msg;
        msg << family << ": sign condition violated at q=" << q << ", omega=(" << w.omega[0]
            << "," << w.omega[1] << "," << w.omega[2] << "), value=" << v;
        throw std::domain_error(msg.str());
      }
    }
  }
}

double grid_max(const ScatteringData& A, const std::function<double(const Direction&)>& factor,
                double sign) {
  const std::vector<double> qs = linspace(-2.0 * A.q_support_cut, 2.0 * A.q_support_cut, 801);
  std::vector<Direction> dirs = A.radial ? std::vector<Direction>{Direction{}} : direction_grid(32);
  double worst = 0.0;
  for (const Direction& w : dirs)
    for (double q : qs) worst = std::max(worst, sign * factor(w) * A(q, w));
  return worst;
}

// Quadrature of f(p) dp over (-inf, q] using fixed panels anchored at the
// support cut; the panel layout depends only on q so the result is smooth in
// every other parameter.
double integrate_from_support(const std::function<double(double)>& f, double q_cut, double q) {
  const double lo = -q_cut - 2.0;
  if (q <= lo) return 0.0;
  const int panels = std::max(8, static_cast<int>(std::ceil((q - lo) / 0.25)));
  return integrate_gl(f, lo, q, panels);
}

}  // namespace

ReducedSolution closed_form_semilinear(const ScatteringData& A,
                                       const std::function<double(const Direction&)>& F) {
  check_sign_condition(A, F, true, "closed_form_semilinear");
  ReducedSolution sol;
  sol.kind = ReducedKind::closed_semilinear;
  sol.M = 1;
  sol.radial = A.radial;
  sol.data = A;
  sol.system = std::make_shared<WaveSystemCoefficients>(builtin_system("semilinear_ut2"));

  const double neg_FA_max = grid_max(A, F, -1.0);  // max of -F A >= 0
  sol.delta0 = neg_FA_max <= 1e-300 ? 1.0 : std::min(1.0, 1.0 / neg_FA_max);

  sol.mu_partial_fn = [](double, double, const Direction&, int a, int b) {
    return (a == 0 && b == 0) ? -2.0 : 0.0;
  };
  ScatteringData data = A;
  sol.Uq_partial_fn = [data, F](double s, double q, const Direction& w, int, int a,
                                int b) -> double {
    const double Fv = F(w);
    const double A0 = data.A(q, w, 0);
    const double D = 2.0 - Fv * A0 * s;
    const double A1 = b >= 1 ? data.A(q, w, 1) : 0.0;
    const double A2 = b >= 2 ? data.A(q, w, 2) : 0.0;
    const double A3 = b >= 3 ? data.A(q, w, 3) : 0.0;
    const double D2 = D * D, D3 = D2 * D, D4 = D3 * D;
    if (a == 0 && b == 0) return 2.0 * A0 / D;
    if (a == 1 && b == 0) return 2.0 * Fv * A0 * A0 / D2;
    if (a == 2 && b == 0) return 4.0 * Fv * Fv * A0 * A0 * A0 / D3;
    if (a == 3 && b == 0) return 12.0 * Fv * Fv * Fv * A0 * A0 * A0 * A0 / D4;
    if (a == 0 && b == 1) return 4.0 * A1 / D2;
    if (a == 0 && b == 2) return 4.0 * A2 / D2 + 8.0 * Fv * s * A1 * A1 / D3;
    if (a == 0 && b == 3)
      return 4.0 * A3 / D2 + 24.0 * Fv * s * A1 * A2 / D3 +
             24.0 * Fv * Fv * s * s * A1 * A1 * A1 / D4;
    if (a == 1 && b == 1) return 8.0 * Fv * A0 * A1 / D3;
    if (a == 2 && b == 1) return 24.0 * Fv * Fv * A0 * A0 * A1 / D4;
    if (a == 1 && b == 2)
      return 8.0 * Fv * A0 * A2 / D3 + 8.0 * Fv * A1 * A1 / D3 +
             24.0 * Fv * Fv * s * A0 * A1 * A1 / D4;
    throw std::invalid_argument("closed_form_semilinear: unsupported derivative order");
  };
  sol.U_partial_fn = [data, F](double s, double q, const Direction& w, int, int a) -> double {
    const double Fv = F(w);
    if (s == 0.0 && a == 0 && data.antiderivative) return data.antiderivative(q, w);
    auto integrand = [&](double p) {
      const double Ap = data.A(p, w, 0);
      const double D = 2.0 - Fv * Ap * s;
      switch (a) {
        case 0: return 2.0 * Ap / D;
        case 1: return 2.0 * Fv * Ap * Ap / (D * D);
        default: return 4.0 * Fv * Fv * Ap * Ap * Ap / (D * D * D);
      }
    };
    return integrate_from_support(integrand, data.q_support_cut, q);
  };
  return sol;
}

ReducedSolution closed_form_quasilinear_grad(const ScatteringData& A,
                                             const std::function<double(const Direction&)>& G) {
  check_sign_condition(A, G, true, "closed_form_quasilinear_grad");
  ReducedSolution sol;
  sol.kind = ReducedKind::closed_quasilinear_grad;
  sol.M = 4;
  sol.radial = A.radial;
  sol.data = A;
  sol.system = std::make_shared<WaveSystemCoefficients>(builtin_system("quasilinear_grad"));

  const double neg_GA_max = grid_max(A, G, -1.0);
  sol.delta0 = neg_GA_max <= 1e-300 ? 1.0 : std::min(1.0, 1.0 / neg_GA_max);

  ScatteringData data = A;
  sol.mu_partial_fn = [data, G](double s, double q, const Direction& w, int a, int b) -> double {
    const double Gv = G(w);
    const double A0 = data.A(q, w, 0);
    const double E = Gv * A0 * s - 2.0;
    const double A1 = b >= 1 ? data.A(q, w, 1) : 0.0;
    const double A2 = b >= 2 ? data.A(q, w, 2) : 0.0;
    const double A3 = b >= 3 ? data.A(q, w, 3) : 0.0;
    const double E2 = E * E, E3 = E2 * E, E4 = E3 * E;
    if (a == 0 && b == 0) return 4.0 / E;
    if (a == 1 && b == 0) return -4.0 * Gv * A0 / E2;
    if (a == 2 && b == 0) return 8.0 * Gv * Gv * A0 * A0 / E3;
    if (a == 3 && b == 0) return -24.0 * Gv * Gv * Gv * A0 * A0 * A0 / E4;
    if (a == 0 && b == 1) return -4.0 * Gv * s * A1 / E2;
    if (a == 0 && b == 2)
      return -4.0 * Gv * s * A2 / E2 + 8.0 * Gv * Gv * s * s * A1 * A1 / E3;
    if (a == 0 && b == 3)
      return -4.0 * Gv * s * A3 / E2 + 24.0 * Gv * Gv * s * s * A1 * A2 / E3 -
             24.0 * Gv * Gv * Gv * s * s * s * A1 * A1 * A1 / E4;
    if (a == 1 && b == 1) return -4.0 * Gv * A1 / E2 + 8.0 * Gv * Gv * s * A0 * A1 / E3;
    if (a == 2 && b == 1)
      return 16.0 * Gv * Gv * A0 * A1 / E3 - 24.0 * Gv * Gv * Gv * s * A0 * A0 * A1 / E4;
    if (a == 1 && b == 2)
      return -4.0 * Gv * A2 / E2 + 8.0 * Gv * Gv * s * A0 * A2 / E3 +
             16.0 * Gv * Gv * s * A1 * A1 / E3 - 24.0 * Gv * Gv * Gv * s * s * A0 * A1 * A1 / E4;
    throw std::invalid_argument("closed_form_quasilinear_grad: unsupported derivative order");
  };
  sol.Uq_partial_fn = [data](double, double q, const Direction& w, int I, int a,
                             int b) -> double {
    if (a > 0) return 0.0;
    const auto what = w.omega_hat();
    return -what[I] * data.A(q, w, b);
  };
  sol.U_partial_fn = [data](double, double q, const Direction& w, int I, int a) -> double {
    if (a > 0) return 0.0;
    const auto what = w.omega_hat();
    if (data.antiderivative) return -what[I] * data.antiderivative(q, w);
    auto integrand = [&](double p) { return data.A(p, w, 0); };
    return -what[I] * integrate_from_support(integrand, data.q_support_cut, q);
  };
  return sol;
}

ReducedSolution closed_form_euler(const ScatteringData& A, double cs1) {
  const double kfac = 1.0 + cs1;
  check_sign_condition(
      A, [kfac](const Direction&) { return kfac; }, false, "closed_form_euler");
  ReducedSolution sol;
  sol.kind = ReducedKind::closed_euler;
  sol.M = 4;
  sol.radial = A.radial;
  sol.data = A;
  sol.system = std::make_shared<WaveSystemCoefficients>(builtin_system("euler", cs1));

  const double K_max = grid_max(A, [kfac](const Direction&) { return kfac; }, 1.0);
  // Keep the denominator Ks+1 >= 1/2 down to s = -delta0.
  sol.delta0 = K_max <= 1e-300 ? 1.0 : std::min(1.0, 0.5 / K_max);

  ScatteringData data = A;
  sol.mu_partial_fn = [data, kfac](double s, double q, const Direction& w, int a,
                                   int b) -> double {
    const double K0 = kfac * data.A(q, w, 0);
    const double P = K0 * s + 1.0;
    const double K1 = b >= 1 ? kfac * data.A(q, w, 1) : 0.0;
    const double K2 = b >= 2 ? kfac * data.A(q, w, 2) : 0.0;
    const double K3 = b >= 3 ? kfac * data.A(q, w, 3) : 0.0;
    const double P2 = P * P, P3 = P2 * P, P4 = P3 * P;
    if (a == 0 && b == 0) return -2.0 / P;
    if (a == 1 && b == 0) return 2.0 * K0 / P2;
    if (a == 2 && b == 0) return -4.0 * K0 * K0 / P3;
    if (a == 3 && b == 0) return 12.0 * K0 * K0 * K0 / P4;
    if (a == 0 && b == 1) return 2.0 * s * K1 / P2;
    if (a == 0 && b == 2) return 2.0 * s * K2 / P2 - 4.0 * s * s * K1 * K1 / P3;
    if (a == 0 && b == 3)
      return 2.0 * s * K3 / P2 - 12.0 * s * s * K1 * K2 / P3 +
             12.0 * s * s * s * K1 * K1 * K1 / P4;
    if (a == 1 && b == 1) return 2.0 * K1 / P2 - 4.0 * s * K0 * K1 / P3;
    if (a == 2 && b == 1) return -8.0 * K0 * K1 / P3 + 12.0 * s * K0 * K0 * K1 / P4;
    if (a == 1 && b == 2)
      return 2.0 * K2 / P2 - 4.0 * s * K0 * K2 / P3 - 8.0 * s * K1 * K1 / P3 +
             12.0 * s * s * K0 * K1 * K1 / P4;
    throw std::invalid_argument("closed_form_euler: unsupported derivative order");
  };
  sol.Uq_partial_fn = [data](double, double q, const Direction& w, int I, int a,
                             int b) -> double {
    if (a > 0) return 0.0;
    const double factor = I == 0 ? 1.0 : w.omega[I - 1];
    return factor * data.A(q, w, b);
  };
  sol.U_partial_fn = [data](double, double q, const Direction& w, int I, int a) -> double {
    if (a > 0) return 0.0;
    const double factor = I == 0 ? 1.0 : w.omega[I - 1];
    if (data.antiderivative) return factor * data.antiderivative(q, w);
    auto integrand = [&](double p) { return data.A(p, w, 0); };
    return factor * integrate_from_support(integrand, data.q_support_cut, q);
  };
  return sol;
}

double hormander_shock_time(const std::function<double(double q, int deriv)>& V0,
                            HormanderFamily family, double F, double q_lo, double q_hi,
                            int n_nodes, double slope_tol) {
  const std::vector<double> qs = linspace(q_lo, q_hi, n_nodes);
  double s_star = std::numeric_limits<double>::infinity();
  for (double q : qs) {
    const double v = V0(q, 0);
    if (!std::isfinite(v)) throw std::domain_error("hormander_shock_time: non-finite V0 sample");
    if (family == HormanderFamily::burgers) {
      const double dv = V0(q, 1);
      if (!std::isfinite(dv))
        throw std::domain_error("hormander_shock_time: non-finite V0' sample");
      if (dv < -slope_tol) s_star = std::min(s_star, -2.0 / dv);
    } else {
      const double fv = F * v;
      if (fv > slope_tol) s_star = std::min(s_star, 2.0 / fv);
    }
  }
  return s_star;
}

std::map<std::string, double> constraint_residual(const ReducedSolution& sol,
                                                  const ReducedGrid& grid) {
  if (grid.M != 4)
    throw std::invalid_argument("constraint_residual: system carries no constraints");
  std::map<std::string, double> out;
  const bool euler = sol.kind == ReducedKind::closed_euler ||
                     (sol.system && sol.system->name == "euler");
  const bool quasi = sol.kind == ReducedKind::closed_quasilinear_grad ||
                     (sol.system && sol.system->name == "quasilinear_grad");
  if (!euler && !quasi)
    throw std::invalid_argument("constraint_residual: unconstrained system");

  for (size_t k = 0; k < grid.s_nodes.size(); ++k) {
    for (size_t wi = 0; wi < grid.omega_nodes.size(); ++wi) {
      const auto& w = grid.omega_nodes[wi];
      const auto what = w.omega_hat();
      const auto& slice = grid.values[k][wi];
      for (size_t j = 0; j < grid.q_nodes.size(); ++j) {
        std::array<double, 4> uq;
        for (int I = 0; I < 4; ++I) uq[I] = slice.muUq[I][j] / slice.mu[j];
        if (quasi) {
          double& r = out["dq_symmetry"];
          for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
              r = std::max(r, std::fabs(what[a] * uq[b] - what[b] * uq[a]));
        } else {
          double dot = 0.0;
          for (int c = 1; c <= 3; ++c) dot += w.omega[c - 1] * uq[c];
          out["time_component"] = std::max(out["time_component"], std::fabs(uq[0] - dot));
          double& rv = out["velocity_alignment"];
          for (int a = 1; a <= 3; ++a)
            rv = std::max(rv, std::fabs(uq[a] - w.omega[a - 1] * uq[0]));
          double& rs = out["angular_symmetry"];
          for (int a = 1; a <= 3; ++a)
            for (int b = a + 1; b <= 3; ++b)
              rs = std::max(rs,
                            std::fabs(w.omega[a - 1] * uq[b] - w.omega[b - 1] * uq[a]));
        }
      }
    }
  }
  return out;
}

}  // namespace asympwave
