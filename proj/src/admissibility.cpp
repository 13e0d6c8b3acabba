#include "asympwave/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace asympwave {

AdmissibilityGrid AdmissibilityGrid::standard(const ReducedSolution& sol, double s_max,
                                              double q_span, int n_s, int n_q, int n_omega) {
  AdmissibilityGrid g;
  g.s_nodes = linspace(-sol.delta0, s_max, n_s);
  g.q_nodes = linspace(-q_span, q_span, n_q);
  g.omega_nodes = sol.radial ? std::vector<Direction>{Direction{}} : direction_grid(n_omega);
  return g;
}

AdmissibilityGrid AdmissibilityGrid::refined() const {
  // Doubled resolution and doubled q-range. 2n-1 nodes keep the original
  // sample points (and the q = 0 peak of symmetric data) in the finer grid.
  AdmissibilityGrid g;
  g.s_nodes =
      linspace(s_nodes.front(), s_nodes.back(), 2 * static_cast<int>(s_nodes.size()) - 1);
  const double span = q_nodes.back();
  g.q_nodes = linspace(-2.0 * span, 2.0 * span, 2 * static_cast<int>(q_nodes.size()) - 1);
  g.omega_nodes = omega_nodes;
  return g;
}

const BoundRecord* AdmissibilityReport::find(const std::string& id) const {
  for (const auto& b : bounds)
    if (b.bound_id == id) return &b;
  return nullptr;
}

namespace {

struct RatioTrack {
  std::vector<double> per_s;  // max over (q, omega) per s-node
  std::vector<double> worst_q;
  std::vector<Direction> worst_omega;

  explicit RatioTrack(size_t n) : per_s(n, 0.0), worst_q(n, 0.0), worst_omega(n) {}

  void update(size_t si, double ratio, double q, const Direction& w) {
    if (!(ratio <= per_s[si])) {  // also promotes NaN/inf
      per_s[si] = ratio;
      worst_q[si] = q;
      worst_omega[si] = w;
    }
  }
};

// Fit LHS(s) <= C exp(C s): exponent from a slope regression of the per-s
// envelope (clipped at 0), amplitude from the residual maximum.
BoundRecord fit_envelope(const std::string& id, const RatioTrack& track,
                         const std::vector<double>& s_nodes) {
  BoundRecord rec;
  rec.bound_id = id;
  std::vector<double> xs, ys;
  for (size_t i = 0; i < s_nodes.size(); ++i) {
    if (!std::isfinite(track.per_s[i])) rec.finite = false;
    if (track.per_s[i] > 1e-300 && std::isfinite(track.per_s[i])) {
      xs.push_back(s_nodes[i]);
      ys.push_back(std::log(track.per_s[i]));
    }
  }
  if (!rec.finite) {
    rec.fitted_C = std::numeric_limits<double>::infinity();
    return rec;
  }
  if (xs.size() < 2) {
    rec.fitted_C = 0.0;  // identically zero quantity
    return rec;
  }
  const LineFit fit = least_squares_line(xs, ys);
  const double c_exp = std::max(0.0, fit.slope);
  double c_amp = 0.0;
  size_t worst = 0;
  for (size_t i = 0; i < s_nodes.size(); ++i) {
    const double v = track.per_s[i] * std::exp(-c_exp * s_nodes[i]);
    if (v > c_amp) {
      c_amp = v;
      worst = i;
    }
  }
  rec.fitted_C = std::max(c_amp, c_exp);
  rec.worst_s = s_nodes[worst];
  rec.worst_q = track.worst_q[worst];
  rec.worst_omega = track.worst_omega[worst];
  rec.finite = std::isfinite(rec.fitted_C);
  return rec;
}

std::vector<BoundRecord> evaluate_bounds(const ReducedSolution& sol, double gamma_plus,
                                         double gamma_minus, const AdmissibilityGrid& grid,
                                         int max_order) {
  const size_t ns = grid.s_nodes.size();
  const int M = sol.M;

  RatioTrack mu_upper(ns), mu_lower(ns), mu_q(ns), muUq(ns), combo_g3(ns), combo_g2(ns),
      mu_plus2(ns), u_env(ns), uq_env(ns);

  std::vector<std::array<int, 3>> tuples_abc;  // (a,b,c) for 3.8 / 3.10
  for (int a = 0; a <= max_order; ++a)
    for (int b = 0; a + b <= max_order; ++b)
      for (int c = 0; a + b + c <= max_order; ++c)
        if (a + b <= 3 && c <= 2) tuples_abc.push_back({a, b, c});
  std::vector<std::array<int, 2>> tuples_ac;  // (a,c) for 3.9
  for (int a = 0; a <= std::min(max_order, 2); ++a)
    for (int c = 0; a + c <= max_order && c <= 2; ++c) tuples_ac.push_back({a, c});

  for (size_t wi = 0; wi < grid.omega_nodes.size(); ++wi) {
    const Direction& w = grid.omega_nodes[wi];
    AngularCoefficients ang;
    if (sol.system) ang = angular_coefficients(*sol.system, w);

    // Cumulative tables of d_s^a U per s-slice on a fine q-grid; the tail
    // below the support cut is under the 1e-14 support threshold.
    const double q_lo = std::min(grid.q_nodes.front(), -sol.data.q_support_cut - 2.0);
    const std::vector<double> fine_q = linspace(q_lo, grid.q_nodes.back(), 4097);
    const double fine_h = fine_q[1] - fine_q[0];

    for (size_t si = 0; si < ns; ++si) {
      const double s = grid.s_nodes[si];

      std::vector<std::vector<std::vector<double>>> u_tab(3,
                                                          std::vector<std::vector<double>>(M));
      for (int a = 0; a <= std::min(max_order, 2); ++a) {
        for (int I = 0; I < M; ++I) {
          std::vector<double> integrand(fine_q.size());
          for (size_t j = 0; j < fine_q.size(); ++j)
            integrand[j] = sol.Uq_partial(s, fine_q[j], w, I, a, 0);
          std::vector<double>& acc = u_tab[a][I];
          acc.assign(fine_q.size(), 0.0);
          for (size_t j = 1; j < fine_q.size(); ++j) {
            if (j + 1 < fine_q.size())
              acc[j] = acc[j - 1] + (fine_h / 12.0) * (5.0 * integrand[j - 1] +
                                                       8.0 * integrand[j] - integrand[j + 1]);
            else
              acc[j] = acc[j - 1] + 0.5 * fine_h * (integrand[j - 1] + integrand[j]);
          }
        }
      }
      auto u_lookup = [&](int a, int I, double q) {
        const double x = (q - fine_q.front()) / fine_h;
        const int j = std::clamp(static_cast<int>(x), 0, static_cast<int>(fine_q.size()) - 2);
        const double t = x - j;
        return (1.0 - t) * u_tab[a][I][j] + t * u_tab[a][I][j + 1];
      };

      for (double q : grid.q_nodes) {
        const double gamma_sgn = q >= 0.0 ? gamma_plus : gamma_minus;
        const double br = bracket(q);
        const double mu = sol.mu(s, q, w);

        if (!(mu < 0.0)) {
          mu_upper.update(si, std::numeric_limits<double>::infinity(), q, w);
        } else {
          mu_upper.update(si, -mu, q, w);
          mu_lower.update(si, -1.0 / mu, q, w);
        }

        if (std::fabs(s) > 0.05) {
          const double lhs = std::fabs(sol.mu_partial(s, q, w, 0, 1));
          mu_q.update(si, lhs * std::pow(br, 1.0 + gamma_sgn) / std::fabs(s * mu), q, w);
        }

        double mu_uq = 0.0;
        for (int I = 0; I < M; ++I) mu_uq = std::max(mu_uq, std::fabs(mu * sol.Uq(s, q, w, I)));
        muUq.update(si, mu_uq, q, w);

        if (sol.system) {
          const double mu_q_val = sol.mu_partial(s, q, w, 0, 1);
          double sum_g3 = 0.0, sum_g2 = 0.0;
          for (int K = 0; K < M; ++K) {
            const double dq_muUq =
                mu_q_val * sol.Uq(s, q, w, K) + mu * sol.Uq_partial(s, q, w, K, 0, 1);
            for (int J = 0; J < M; ++J) {
              sum_g3 += std::fabs(ang.G3[J] * mu * dq_muUq);
              sum_g2 += std::fabs(ang.G2[J] * dq_muUq);
            }
          }
          combo_g3.update(si, sum_g3, q, w);
          combo_g2.update(si, sum_g2 * std::pow(br, gamma_sgn), q, w);
        }

        for (const auto& t : tuples_abc) {
          const int a = t[0], b = t[1], c = t[2];
          double lhs;
          if (c == 0)
            lhs = (a == 0 && b == 0) ? std::fabs(mu + 2.0)
                                     : std::fabs(sol.mu_partial(s, q, w, a, b));
          else
            lhs = std::fabs(sol.omega_derivative(0, s, q, w, 0, a, b, c));
          mu_plus2.update(si, lhs * std::pow(br, b + gamma_sgn), q, w);
        }

        const double u_weight = std::pow(bracket(std::max(0.0, -q)), gamma_minus - 1.0);
        for (const auto& t : tuples_ac) {
          const int a = t[0], c = t[1];
          for (int I = 0; I < M; ++I) {
            const double lhs = c == 0 ? std::fabs(u_lookup(a, I, q))
                                      : std::fabs(sol.omega_derivative(2, s, q, w, I, a, 0, c));
            u_env.update(si, lhs * u_weight, q, w);
          }
        }

        for (const auto& t : tuples_abc) {
          const int a = t[0], b = t[1], c = t[2];
          if (a + b > 3) continue;
          for (int I = 0; I < M; ++I) {
            const double lhs = c == 0 ? std::fabs(sol.Uq_partial(s, q, w, I, a, b))
                                      : std::fabs(sol.omega_derivative(1, s, q, w, I, a, b, c));
            uq_env.update(si, lhs * std::pow(br, b + gamma_sgn), q, w);
          }
        }
      }
    }
  }

  std::vector<BoundRecord> out;
  {
    BoundRecord up = fit_envelope("3.3", mu_upper, grid.s_nodes);
    // The lower envelope -mu >= C^-1 exp(-Cs) fits like the upper one with
    // the sign of s flipped.
    std::vector<double> neg_s(grid.s_nodes.size());
    for (size_t i = 0; i < ns; ++i) neg_s[i] = -grid.s_nodes[i];
    BoundRecord lo = fit_envelope("3.3", mu_lower, neg_s);
    up.fitted_C = std::max(up.fitted_C, lo.fitted_C);
    up.finite = up.finite && lo.finite;
    out.push_back(up);
  }
  out.push_back(fit_envelope("3.4", mu_q, grid.s_nodes));
  out.push_back(fit_envelope("3.5", muUq, grid.s_nodes));
  out.push_back(fit_envelope("3.6", combo_g3, grid.s_nodes));
  out.push_back(fit_envelope("3.7", combo_g2, grid.s_nodes));
  out.push_back(fit_envelope("3.8", mu_plus2, grid.s_nodes));
  out.push_back(fit_envelope("3.9", u_env, grid.s_nodes));
  out.push_back(fit_envelope("3.10", uq_env, grid.s_nodes));
  return out;
}

}  // namespace

AdmissibilityReport check_admissible(const ReducedSolution& sol, double gamma_plus,
                                     double gamma_minus, const AdmissibilityGrid& grid,
                                     int max_order) {
  if (gamma_plus <= 1.0 || gamma_minus <= 2.0)
    throw std::invalid_argument("check_admissible: need gamma_plus > 1 and gamma_minus > 2");
  if (max_order < 0 || max_order > 2)
    throw std::invalid_argument("check_admissible: max_order must be 0..2");

  AdmissibilityReport rep;
  rep.gamma_plus = gamma_plus;
  rep.gamma_minus = gamma_minus;
  rep.max_order = max_order;
  rep.bounds = evaluate_bounds(sol, gamma_plus, gamma_minus, grid, max_order);
  const std::vector<BoundRecord> refined =
      evaluate_bounds(sol, gamma_plus, gamma_minus, grid.refined(), max_order);
  rep.pass = true;
  for (size_t i = 0; i < rep.bounds.size(); ++i) {
    BoundRecord& b = rep.bounds[i];
    const double c0 = b.fitted_C, c1 = refined[i].fitted_C;
    b.margin = (c0 == 0.0 && c1 == 0.0) ? 0.0 : std::fabs(c1 - c0) / std::max(c0, 1e-300);
    b.finite = b.finite && refined[i].finite;
    b.stable = b.finite && b.margin < rep.stability_threshold;
    rep.pass = rep.pass && b.finite && b.stable;
  }
  return rep;
}

IntegralInequalityResult integral_inequality_check(double gamma_plus, double gamma_minus,
                                                   const std::vector<double>& q_samples) {
  if (gamma_plus <= 1.0 || gamma_minus <= 2.0)
    throw std::invalid_argument("integral_inequality_check: gamma out of range");
  IntegralInequalityResult res;
  for (double q : q_samples) {
    double lhs;  // int_{-inf}^q <p>^{-gamma_sgn(p)} dp in closed form
    if (q <= 0.0) {
      lhs = std::pow(1.0 - q, 1.0 - gamma_minus) / (gamma_minus - 1.0);
    } else {
      lhs = 1.0 / (gamma_minus - 1.0) +
            (1.0 - std::pow(1.0 + q, 1.0 - gamma_plus)) / (gamma_plus - 1.0);
    }
    const double rhs = std::pow(bracket(std::max(0.0, -q)), 1.0 - gamma_minus);
    const double ratio = lhs / rhs;
    if (ratio > res.max_ratio) {
      res.max_ratio = ratio;
      res.worst_q = q;
    }
  }
  return res;
}

}  // namespace asympwave
