#include "asympwave/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace asympwave {

namespace {

double sigma_bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
double sigma_bump_d1(double u) { return u > 0.0 ? std::exp(-1.0 / u) / (u * u) : 0.0; }
double sigma_bump_d2(double u) {
  if (u <= 0.0) return 0.0;
  return std::exp(-1.0 / u) * (1.0 / (u * u * u * u) - 2.0 / (u * u * u));
}

// Smoothstep S with S(u<=0)=0, S(u>=1)=1.
double smoothstep(double u, int order) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return order == 0 ? 1.0 : 0.0;
  const double a = sigma_bump(u), b = sigma_bump(1.0 - u);
  const double D = a + b;
  if (order == 0) return a / D;
  const double a1 = sigma_bump_d1(u), b1 = sigma_bump_d1(1.0 - u);
  const double N = a1 * b + a * b1;
  if (order == 1) return N / (D * D);
  const double a2 = sigma_bump_d2(u), b2 = sigma_bump_d2(1.0 - u);
  const double N1 = a2 * b - a * b2;
  const double D1 = a1 - b1;
  return N1 / (D * D) - 2.0 * N * D1 / (D * D * D);
}

}  // namespace

void CutoffSpec::validate() const {
  if (!(c > 0.0 && c < 0.25)) throw std::invalid_argument("CutoffSpec: c must lie in (0, 1/4)");
}

double CutoffSpec::psi(double x, int order) const {
  const double y = x - 1.0;
  const double ay = std::fabs(y);
  if (ay <= 0.5 * c) return order == 0 ? 1.0 : 0.0;
  if (ay >= c) return 0.0;
  const double u = (c - ay) / (0.5 * c);
  const double du_dx = (y > 0.0 ? -1.0 : 1.0) * 2.0 / c;
  switch (order) {
    case 0: return smoothstep(u, 0);
    case 1: return smoothstep(u, 1) * du_dx;
    case 2: return smoothstep(u, 2) * du_dx * du_dx;
    default: throw std::invalid_argument("CutoffSpec::psi: order must be 0..2");
  }
}

double cutoff_psi(double x, const CutoffSpec& spec, int order) { return spec.psi(x, order); }

UappEvaluator::UappEvaluator(const ReducedSolution& sol, const OpticalParams& params,
                             CutoffSpec spec)
    : sol_(std::make_shared<ReducedSolution>(sol)), params_(params), spec_(spec) {
  spec_.validate();
  params_.validate(sol.delta0);
  exact_q_ = sol.kind == ReducedKind::closed_semilinear;
}

double UappEvaluator::q_of(double t, double r, const Direction& dir) const {
  if (exact_q_ || r <= 0.5 * t) return r - t;
  return solve_q(t, r, dir, *sol_, params_);
}

double UappEvaluator::U_component(double s, double q, const Direction& dir, int I) const {
  if (sol_->kind == ReducedKind::closed_quasilinear_grad ||
      sol_->kind == ReducedKind::closed_euler)
    return sol_->U(s, q, dir, I);
  // Anchored reconstruction: a shared base plus a short local integral keeps
  // the quadrature error smooth across finite-difference stencils.
  const double base = sol_->U(s, q_anchor_, dir, I);
  auto integrand = [&](double p) { return sol_->Uq(s, p, dir, I); };
  const int panels = std::max(1, static_cast<int>(std::ceil(std::fabs(q - q_anchor_) / 0.5)));
  return base + integrate_gl(integrand, q_anchor_, q, panels);
}

std::vector<double> UappEvaluator::value(double t, double r, const Direction& dir) const {
  std::vector<double> u(sol_->M, 0.0);
  if (t <= 0.0 || r <= 0.0) return u;
  const double psi = spec_.psi(r / t, 0);
  if (psi == 0.0) return u;
  const double s = params_.slow_time(t);
  const double q = q_of(t, r, dir);
  for (int I = 0; I < sol_->M; ++I)
    u[I] = params_.epsilon / r * psi * U_component(s, q, dir, I);
  return u;
}

ProfileField build_profile_field(const UappEvaluator& eval, const std::vector<double>& t_nodes,
                                 const std::vector<double>& r_nodes, const Direction& dir) {
  ProfileField field;
  field.t_nodes = t_nodes;
  field.r_nodes = r_nodes;
  field.dir = dir;
  field.M = eval.solution().M;
  field.provenance = std::string(to_string(eval.solution().kind)) + "+" +
                     eval.solution().data.kind;
  const int nt = static_cast<int>(t_nodes.size());
  const int nr = static_cast<int>(r_nodes.size());
  auto zeros = [&] {
    return std::vector<std::vector<std::vector<double>>>(
        nt, std::vector<std::vector<double>>(nr, std::vector<double>(field.M, 0.0)));
  };
  field.u = zeros();
  field.u_t = zeros();
  field.u_r = zeros();
  field.u_tt = zeros();
  field.u_tr = zeros();
  field.u_rr = zeros();

  parallel_for(nt, [&](int ti) {
    for (int ri = 0; ri < nr; ++ri) field.u[ti][ri] = eval.value(t_nodes[ti], r_nodes[ri], dir);
  });

  auto stencil = [](const std::vector<double>& nodes, int i, int m,
                    std::vector<double>* w, int* lo) {
    const int n = static_cast<int>(nodes.size());
    *lo = std::clamp(i - 2, 0, n - 5);
    std::vector<double> xs(nodes.begin() + *lo, nodes.begin() + *lo + 5);
    *w = fd_weights(nodes[i], xs, m);
  };

  for (int ti = 0; ti < nt; ++ti) {
    for (int ri = 0; ri < nr; ++ri) {
      std::vector<double> w;
      int lo;
      for (int m = 1; m <= 2; ++m) {
        stencil(r_nodes, ri, m, &w, &lo);
        auto& dst_r = (m == 1 ? field.u_r : field.u_rr)[ti][ri];
        for (int I = 0; I < field.M; ++I)
          for (int k = 0; k < 5; ++k) dst_r[I] += w[k] * field.u[ti][lo + k][I];
        stencil(t_nodes, ti, m, &w, &lo);
        auto& dst_t = (m == 1 ? field.u_t : field.u_tt)[ti][ri];
        for (int I = 0; I < field.M; ++I)
          for (int k = 0; k < 5; ++k) dst_t[I] += w[k] * field.u[lo + k][ri][I];
      }
      stencil(t_nodes, ti, 1, &w, &lo);
      for (int I = 0; I < field.M; ++I)
        for (int k = 0; k < 5; ++k) field.u_tr[ti][ri][I] += w[k] * field.u_r[lo + k][ri][I];
    }
  }
  return field;
}

namespace {

struct Stencil2D {
  // values[i][j][I] at (t + (i-2)h, r + (j-2)h)
  std::vector<std::vector<std::vector<double>>> values;
  double h = 0.0;

  static Stencil2D build(const UappEvaluator& field, double t, double r, const Direction& dir,
                         double h) {
    Stencil2D st;
    st.h = h;
    st.values.assign(5, std::vector<std::vector<double>>(5));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        st.values[i][j] = field.value(t + (i - 2) * h, r + (j - 2) * h, dir);
    return st;
  }

  // m1/m2: classical 4th-order central weights.
  double d_t(int I) const { return dot1(I, true); }
  double d_r(int I) const { return dot1(I, false); }
  double d_tt(int I) const { return dot2(I, true); }
  double d_rr(int I) const { return dot2(I, false); }
  double d_tr(int I) const {
    static const double w1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
    double acc = 0.0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) acc += w1[i] * w1[j] * values[i][j][I];
    return acc / (144.0 * h * h);
  }

 private:
  double dot1(int I, bool along_t) const {
    static const double w1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += w1[k] * (along_t ? values[k][2][I] : values[2][k][I]);
    return acc / (12.0 * h);
  }
  double dot2(int I, bool along_t) const {
    static const double w2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += w2[k] * (along_t ? values[k][2][I] : values[2][k][I]);
    return acc / (12.0 * h * h);
  }
};

struct DerivBundle {
  std::vector<double> u, u_t, u_r, u_tt, u_tr, u_rr;
};

DerivBundle bundle_from(const Stencil2D& st, int M) {
  DerivBundle b;
  b.u = st.values[2][2];
  b.u_t.resize(M);
  b.u_r.resize(M);
  b.u_tt.resize(M);
  b.u_tr.resize(M);
  b.u_rr.resize(M);
  for (int I = 0; I < M; ++I) {
    b.u_t[I] = st.d_t(I);
    b.u_r[I] = st.d_r(I);
    b.u_tt[I] = st.d_tt(I);
    b.u_tr[I] = st.d_tr(I);
    b.u_rr[I] = st.d_rr(I);
  }
  return b;
}

double bundle_distance(const DerivBundle& a, const DerivBundle& b) {
  double worst = 0.0;
  auto cmp = [&](const std::vector<double>& x, const std::vector<double>& y) {
    for (size_t i = 0; i < x.size(); ++i) {
      const double scale = std::max({std::fabs(x[i]), std::fabs(y[i]), 1e-300});
      worst = std::max(worst, std::fabs(x[i] - y[i]) / scale);
    }
  };
  cmp(a.u_t, b.u_t);
  cmp(a.u_r, b.u_r);
  cmp(a.u_tt, b.u_tt);
  cmp(a.u_tr, b.u_tr);
  cmp(a.u_rr, b.u_rr);
  return worst;
}

// Step-halved derivative bundle with stabilization check on the tables.
DerivBundle converged_bundle(const UappEvaluator& field, double t, double r,
                             const Direction& dir, double* h_used) {
  if (!field.solution().radial)
    throw std::domain_error("wave_residual: only radial scattering data is supported");
  const double h0 = std::min(bracket(r - t), t / 100.0) * 1e-2;
  // The mu == -2 families evaluate anywhere with s >= -delta0; solver-backed
  // charts additionally need the whole stencil inside t >= 1/eps, r > t/2.
  const double t_floor = field.exact_q() ? 0.0 : field.params().T_eps();
  if (t - 2.0 * h0 < t_floor ||
      field.params().slow_time(t - 2.0 * h0) < -field.solution().delta0 ||
      (r - 2.0 * h0) <= 0.5 * (t + 2.0 * h0))
    throw std::domain_error("wave_residual: stencil leaves the chart domain");
  const int M = field.solution().M;
  double h = h0;
  DerivBundle prev = bundle_from(Stencil2D::build(field, t, r, dir, h), M);
  for (int k = 0; k < 4; ++k) {
    const double h2 = 0.5 * h;
    DerivBundle next = bundle_from(Stencil2D::build(field, t, r, dir, h2), M);
    // Derivative magnitudes here are >> rounding noise, so a relative test
    // on the tables is meaningful even when the assembled residual is tiny.
    const double dist = bundle_distance(prev, next);
    if (dist < 0.02) {
      *h_used = h2;
      return next;
    }
    prev = next;
    h = h2;
  }
  throw std::runtime_error("wave_residual: finite differences failed to stabilize");
}

}  // namespace

WaveResidualSample wave_residual(double t, double r, const Direction& dir,
                                 const UappEvaluator& field,
                                 const WaveSystemCoefficients& coeffs) {
  const int M = field.solution().M;
  if (coeffs.M != M) throw std::invalid_argument("wave_residual: system size mismatch");
  WaveResidualSample out;
  DerivBundle b = converged_bundle(field, t, r, dir, &out.h);

  std::vector<std::array<double, 4>> du(M);
  for (int I = 0; I < M; ++I) {
    du[I][0] = b.u_t[I];
    for (int i = 1; i <= 3; ++i) du[I][i] = dir.omega[i - 1] * b.u_r[I];
  }
  const Metric4 g = coeffs.metric_closure(b.u, du);
  const std::vector<double> f = coeffs.source_closure(b.u, du);

  out.residual.resize(M);
  out.piece_g.resize(M);
  out.piece_f = f;
  for (int I = 0; I < M; ++I) {
    double acc = g[0][0] * b.u_tt[I];
    for (int i = 1; i <= 3; ++i) acc += 2.0 * g[0][i] * dir.omega[i - 1] * b.u_tr[I];
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        const double wij = dir.omega[i - 1] * dir.omega[j - 1];
        const double d2 = wij * b.u_rr[I] + ((i == j ? 1.0 : 0.0) - wij) * b.u_r[I] / r;
        acc += g[i][j] * d2;
      }
    }
    out.piece_g[I] = acc;
    out.residual[I] = acc - f[I];
  }
  return out;
}

HessianStructure hessian_structure_check(double t, double r, const Direction& dir,
                                         const UappEvaluator& field) {
  HessianStructure out;
  DerivBundle b = converged_bundle(field, t, r, dir, &out.h);
  const ReducedSolution& sol = field.solution();
  const double s = field.params().slow_time(t);
  const double q = field.q_of(t, r, dir);
  const double psi = field.cutoff().psi(r / t, 0);
  const auto what = dir.omega_hat();

  for (int I = 0; I < sol.M; ++I) {
    const double mu = sol.mu(s, q, dir);
    const double dq_muUq = sol.mu_partial(s, q, dir, 0, 1) * sol.Uq(s, q, dir, I) +
                           mu * sol.Uq_partial(s, q, dir, I, 0, 1);
    const double scale = field.params().epsilon / (4.0 * r) * psi * mu * dq_muUq;
    out.model_scale = std::max(out.model_scale, std::fabs(scale));

    std::vector<double> H(16, 0.0);
    H[0] = b.u_tt[I];
    for (int i = 1; i <= 3; ++i) {
      H[i] = H[4 * i] = dir.omega[i - 1] * b.u_tr[I];
      for (int j = 1; j <= 3; ++j) {
        const double wij = dir.omega[i - 1] * dir.omega[j - 1];
        H[4 * i + j] = wij * b.u_rr[I] + ((i == j ? 1.0 : 0.0) - wij) * b.u_r[I] / r;
      }
    }
    for (int a = 0; a < 4; ++a)
      for (int bb = 0; bb < 4; ++bb)
        out.deviation =
            std::max(out.deviation, std::fabs(H[4 * a + bb] - scale * what[a] * what[bb]));
    if (I == 0) {
      const std::vector<double> ev = sym_eigenvalues(H, 4);
      out.singular_ratio =
          std::fabs(ev[0]) < 1e-300 ? 0.0 : std::fabs(ev[1]) / std::fabs(ev[0]);
    }
  }
  return out;
}

double w_antiderivative(const ReducedSolution& sol, double s, double q, const Direction& dir,
                        double* tail_bound) {
  if (sol.kind != ReducedKind::closed_quasilinear_grad)
    throw std::invalid_argument("w_antiderivative: requires the gradient-coupled family");
  const double cut = sol.data.q_support_cut;
  const double lo = -std::max({40.0, 4.0 * cut, std::fabs(q) + 10.0});
  auto integrand = [&](double p) {
    return 2.0 * sol.U(s, p, dir, 0) / sol.mu(s, p, dir);
  };
  const int panels = std::max(16, static_cast<int>(std::ceil((q - lo) / 0.25)));
  const double value = q <= lo ? 0.0 : integrate_gl(integrand, lo, q, panels);
  if (tail_bound) {
    // |U_0 / mu| = O(<s> <p>^{1-gamma_minus}) below the support window.
    const double c_amp = sol.data.decay_constants(801)[0];
    const double gm = sol.data.gamma_minus;
    const double inv_mu_max = 0.25 * (2.0 + std::fabs(s) * c_amp);
    *tail_bound = 2.0 * inv_mu_max * c_amp / ((gm - 1.0) * (gm - 2.0)) *
                  std::pow(bracket(lo), 2.0 - gm);
  }
  return value;
}

SemilinearProfileTable::SemilinearProfileTable(const ReducedSolution& sol,
                                               const OpticalParams& params, CutoffSpec spec,
                                               double t_min, double t_max, double q_span)
    : sol_(std::make_shared<ReducedSolution>(sol)), params_(params), spec_(spec) {
  spec_.validate();
  if (sol.kind != ReducedKind::closed_semilinear)
    throw std::invalid_argument("SemilinearProfileTable: requires a mu == -2 family");
  const double s_lo = params.slow_time(t_min) - 1e-3;
  const double s_hi = params.slow_time(t_max) + 1e-3;
  s_nodes_ = linspace(s_lo, s_hi, 33);
  const double q_lo = std::min(-sol.data.q_support_cut - 2.0, -q_span);
  const int nq = static_cast<int>(std::ceil((q_span - q_lo) / 0.01)) + 1;
  q_nodes_ = linspace(q_lo, q_span, nq);
  const double h = q_nodes_[1] - q_nodes_[0];

  tables_.assign(4, std::vector<std::vector<double>>(
                        s_nodes_.size(), std::vector<double>(q_nodes_.size(), 0.0)));
  const Direction dir;
  for (int a = 0; a <= 3; ++a) {
    parallel_for(static_cast<int>(s_nodes_.size()), [&](int si) {
      std::vector<double> integrand(q_nodes_.size());
      for (size_t j = 0; j < q_nodes_.size(); ++j)
        integrand[j] = sol_->Uq_partial(s_nodes_[si], q_nodes_[j], dir, 0, a, 0);
      auto& acc = tables_[a][si];
      for (size_t j = 1; j < q_nodes_.size(); ++j) {
        if (j + 1 < q_nodes_.size())
          acc[j] = acc[j - 1] + (h / 12.0) * (5.0 * integrand[j - 1] + 8.0 * integrand[j] -
                                              integrand[j + 1]);
        else
          acc[j] = acc[j - 1] + 0.5 * h * (integrand[j - 1] + integrand[j]);
      }
    });
  }
}

double SemilinearProfileTable::table(int a, double s, double q, const Direction& dir) const {
  if (q <= q_nodes_.front()) return 0.0;
  if (q >= q_nodes_.back())
    throw std::domain_error("SemilinearProfileTable: q beyond the tabulated window");
  if (s < s_nodes_.front() || s > s_nodes_.back())
    throw std::domain_error("SemilinearProfileTable: s outside the tabulated window");

  const double hq = q_nodes_[1] - q_nodes_[0];
  const int j = std::clamp(static_cast<int>((q - q_nodes_.front()) / hq), 0,
                           static_cast<int>(q_nodes_.size()) - 2);
  const double hs = s_nodes_[1] - s_nodes_[0];
  const int i = std::clamp(static_cast<int>((s - s_nodes_.front()) / hs), 0,
                           static_cast<int>(s_nodes_.size()) - 2);

  // Hermite in q (exact endpoint slopes d_q d_s^a U), then Hermite in s
  // (slopes from the a+1 table where available).
  auto q_interp = [&](int a_idx, int si) {
    const double x = (q - q_nodes_[j]) / hq;
    const double y0 = tables_[a_idx][si][j], y1 = tables_[a_idx][si][j + 1];
    const double m0 = sol_->Uq_partial(s_nodes_[si], q_nodes_[j], dir, 0, a_idx, 0) * hq;
    const double m1 = sol_->Uq_partial(s_nodes_[si], q_nodes_[j + 1], dir, 0, a_idx, 0) * hq;
    const double x2 = x * x, x3 = x2 * x;
    return (2.0 * x3 - 3.0 * x2 + 1.0) * y0 + (x3 - 2.0 * x2 + x) * m0 +
           (-2.0 * x3 + 3.0 * x2) * y1 + (x3 - x2) * m1;
  };
  const double x = (s - s_nodes_[i]) / hs;
  const double y0 = q_interp(a, i), y1 = q_interp(a, i + 1);
  double m0, m1;
  if (a + 1 <= 3) {
    m0 = q_interp(a + 1, i) * hs;
    m1 = q_interp(a + 1, i + 1) * hs;
  } else {
    m0 = m1 = (y1 - y0);
  }
  const double x2 = x * x, x3 = x2 * x;
  return (2.0 * x3 - 3.0 * x2 + 1.0) * y0 + (x3 - 2.0 * x2 + x) * m0 +
         (-2.0 * x3 + 3.0 * x2) * y1 + (x3 - x2) * m1;
}

SemilinearProfileTable::Bundle SemilinearProfileTable::eval(double t, double r,
                                                            const Direction& dir) const {
  Bundle out;
  if (r <= 0.0) return out;
  const double rho = r / t;
  const double psi0 = spec_.psi(rho, 0);
  const double q = r - t;
  if (psi0 == 0.0 && spec_.psi(rho, 1) == 0.0) return out;
  if (q >= q_nodes_.back()) return out;  // beyond the support window, u_app = 0

  const double s = params_.slow_time(t);
  const double eps = params_.epsilon;
  const double psi1 = spec_.psi(rho, 1);
  const double psi2 = spec_.psi(rho, 2);

  const double U = table(0, s, q, dir);
  const double Us = table(1, s, q, dir);
  const double Uss = table(2, s, q, dir);
  const double Uq = sol_->Uq_partial(s, q, dir, 0, 0, 0);
  const double Uqq = sol_->Uq_partial(s, q, dir, 0, 0, 1);
  const double Usq = sol_->Uq_partial(s, q, dir, 0, 1, 0);

  const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
  out.u = eps / r * psi0 * U;
  out.u_t = eps / r * (psi1 * (-r / t2) * U + psi0 * (eps * Us / t - Uq));
  out.u_r = -eps / (r * r) * psi0 * U + eps / r * (psi1 / t * U + psi0 * Uq);
  out.u_tt = eps / r *
             (psi2 * r * r / t4 * U + 2.0 * psi1 * r / t3 * U -
              2.0 * psi1 * r / t2 * (eps * Us / t - Uq) +
              psi0 * (eps * eps * Uss / t2 - eps * Us / t2 - 2.0 * eps * Usq / t + Uqq));
  out.u_rr = 2.0 * eps / (r * r * r) * psi0 * U -
             2.0 * eps / (r * r) * (psi1 * U / t + psi0 * Uq) +
             eps / r * (psi2 * U / t2 + 2.0 * psi1 * Uq / t + psi0 * Uqq);
  out.u_tr = -eps / t2 * (psi2 / t * U + psi1 * Uq) -
             eps / (r * r) * psi0 * (eps * Us / t - Uq) +
             eps / r * (psi1 / t * (eps * Us / t - Uq) + psi0 * (eps * Usq / t - Uqq));
  out.box = -out.u_tt + out.u_rr + 2.0 / r * out.u_r;
  return out;
}

double SemilinearProfileTable::source_residual(double t, double r, const Direction& dir) const {
  const Bundle b = eval(t, r, dir);
  return b.box - b.u_t * b.u_t;
}

}  // namespace asympwave
