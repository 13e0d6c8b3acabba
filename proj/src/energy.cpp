#include "asympwave/energy.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace asympwave {

void WeightParams::validate(double gamma_plus, double gamma_minus) const {
  const double g1_cap = std::min(2.0 * (gamma_minus - 1.0), 4.0);
  if (!(gamma1 > 2.0 && gamma1 < g1_cap))
    throw std::invalid_argument("WeightParams: gamma1 outside (2, min{2(gamma_minus-1), 4})");
  const double g2_cap = std::min({gamma_minus - 2.0, gamma_plus - 1.0, 0.5});
  if (!(gamma2 > 0.0 && gamma2 < g2_cap))
    throw std::invalid_argument(
        "WeightParams: gamma2 outside (0, min{gamma_minus-2, gamma_plus-1, 1/2})");
  if (!(c0 >= 2.0)) throw std::invalid_argument("WeightParams: c0 must be >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("WeightParams: epsilon must be positive");
}

double weight_eval(double t, double q, const WeightParams& params, WeightKind which) {
  switch (which) {
    case WeightKind::m:
      return q >= 0.0 ? 1.0 : std::pow(1.0 - q, params.gamma1);
    case WeightKind::sigma:
      return q >= 0.0 ? std::pow(1.0 + q, -params.gamma2)
                      : 2.0 - std::pow(1.0 - q, -params.gamma2);
    case WeightKind::w0:
      return q >= 0.0 ? 1.0 : std::pow(bracket(q), params.gamma1);
    case WeightKind::w: {
      if (!(t >= 1.0 / params.epsilon))
        throw std::domain_error("weight_eval: w needs t >= 1/eps");
      const double m = weight_eval(t, q, params, WeightKind::m);
      const double sig = weight_eval(t, q, params, WeightKind::sigma);
      return m * std::exp(params.c0 * params.epsilon * std::log(t) * sig);
    }
  }
  throw std::invalid_argument("weight_eval: unknown weight kind");
}

void FieldSnapshot::validate() const {
  if (r_nodes.size() < 5) throw std::invalid_argument("FieldSnapshot: need >= 5 nodes");
  if (phi.size() != r_nodes.size() || phi_t.size() != r_nodes.size() ||
      phi_r.size() != r_nodes.size())
    throw std::invalid_argument("FieldSnapshot: field arrays must match r_nodes");
  if (!(r_nodes.front() > 0.0))
    throw std::invalid_argument("FieldSnapshot: r_nodes must start above 0");
  for (size_t i = 1; i < r_nodes.size(); ++i)
    if (!(r_nodes[i] > r_nodes[i - 1]))
      throw std::invalid_argument("FieldSnapshot: r_nodes must be strictly increasing");
  if (compact_support && (std::fabs(phi.front()) > 1e-12 || std::fabs(phi.back()) > 1e-12))
    throw std::invalid_argument("FieldSnapshot: field must vanish at the boundary nodes");
}

FieldSnapshot random_snapshot(std::uint64_t seed, double t, double half_width, int n_nodes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  struct Mode {
    double amp, freq, phase, center, width;
  };
  std::vector<Mode> modes(5);
  for (auto& m : modes) {
    m.amp = uni(rng);
    m.freq = 0.5 + 2.0 * std::fabs(uni(rng));
    m.phase = M_PI * uni(rng);
    m.center = 0.5 * half_width * uni(rng);
    m.width = 2.0 + 4.0 * std::fabs(uni(rng));
  }
  std::vector<Mode> modes_t(5);
  for (auto& m : modes_t) {
    m.amp = uni(rng);
    m.freq = 0.5 + 2.0 * std::fabs(uni(rng));
    m.phase = M_PI * uni(rng);
    m.center = 0.5 * half_width * uni(rng);
    m.width = 2.0 + 4.0 * std::fabs(uni(rng));
  }
  const double R = half_width;
  auto envelope = [R](double y, int d) {
    // C^2 compact bump (1 - (y/R)^2)^4 on |y| < R.
    const double z = y / R;
    if (std::fabs(z) >= 1.0) return 0.0;
    const double p = 1.0 - z * z;
    if (d == 0) return p * p * p * p;
    return -8.0 * z / R * p * p * p;
  };
  auto field = [&](const std::vector<Mode>& ms, double y, int d) {
    double acc = 0.0;
    for (const auto& m : ms) {
      const double g = std::exp(-((y - m.center) / m.width) * ((y - m.center) / m.width));
      const double osc = std::sin(m.freq * y + m.phase);
      if (d == 0) {
        acc += m.amp * g * osc;
      } else {
        const double gp = g * (-2.0 * (y - m.center) / (m.width * m.width));
        acc += m.amp * (gp * osc + g * m.freq * std::cos(m.freq * y + m.phase));
      }
    }
    return acc;
  };

  FieldSnapshot snap;
  snap.t = t;
  const double r_lo = std::max(1e-6, t - R);
  snap.r_nodes = linspace(r_lo, t + R, n_nodes);
  snap.phi.resize(n_nodes);
  snap.phi_t.resize(n_nodes);
  snap.phi_r.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    const double y = snap.r_nodes[i] - t;
    snap.phi[i] = envelope(y, 0) * field(modes, y, 0);
    snap.phi_r[i] = envelope(y, 1) * field(modes, y, 0) + envelope(y, 0) * field(modes, y, 1);
    snap.phi_t[i] = envelope(y, 0) * field(modes_t, y, 0);
  }
  snap.phi.front() = snap.phi.back() = 0.0;
  return snap;
}

namespace {

double radial_integral(const std::vector<double>& r_nodes, const std::vector<double>& density) {
  // 4 pi int density r^2 dr; Simpson assuming uniform spacing.
  std::vector<double> f(r_nodes.size());
  for (size_t i = 0; i < r_nodes.size(); ++i) f[i] = density[i] * r_nodes[i] * r_nodes[i];
  const double h = r_nodes[1] - r_nodes[0];
  return 4.0 * M_PI * simpson(f, h);
}

}  // namespace

double energy_Eu(const FieldSnapshot& snap, const std::vector<Metric4>& metric_per_node,
                 const Direction& dir, const std::vector<double>& q_per_node,
                 const WeightParams& params, const std::vector<double>* weight_override) {
  snap.validate();
  const size_t n = snap.r_nodes.size();
  if (metric_per_node.size() != n || q_per_node.size() != n)
    throw std::invalid_argument("energy_Eu: per-node arrays must match the snapshot");
  std::vector<double> density(n);
  for (size_t i = 0; i < n; ++i) {
    const Metric4& g = metric_per_node[i];
    double g_ww = 0.0;
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b) g_ww += g[a][b] * dir.omega[a - 1] * dir.omega[b - 1];
    const double g_tt = -g[0][0];
    if (snap.phi[i] != 0.0 || snap.phi_t[i] != 0.0 || snap.phi_r[i] != 0.0) {
      if (!(g_tt > 0.0) || !(g_ww > 0.0))
        throw std::domain_error("energy_Eu: non-coercive quadratic form on the support");
    }
    const double w = weight_override ? (*weight_override)[i]
                                     : weight_eval(snap.t, q_per_node[i], params, WeightKind::w);
    density[i] =
        w * (g_tt * snap.phi_t[i] * snap.phi_t[i] + g_ww * snap.phi_r[i] * snap.phi_r[i]);
  }
  return radial_integral(snap.r_nodes, density);
}

double energy_Eq(const FieldSnapshot& snap, const std::vector<ConeSample>& cone_per_node,
                 const WeightParams& params) {
  snap.validate();
  const size_t n = snap.r_nodes.size();
  if (cone_per_node.size() != n)
    throw std::invalid_argument("energy_Eq: cone samples must match the snapshot");
  const double lneps = std::log(1.0 / params.epsilon);
  std::vector<double> density(n);
  for (size_t i = 0; i < n; ++i) {
    const ConeSample& cs = cone_per_node[i];
    if (!(cs.q_t < 0.0)) throw std::domain_error("energy_Eq: q_t must stay negative");
    const double q = cs.q;
    const double coef = (q < 0.0 ? 1.0 / (1.0 - q) : 0.0) +
                        params.epsilon * lneps * std::pow(1.0 + std::fabs(q), -1.0 - params.gamma2);
    // Radial field: the alpha = 0 term vanishes and the spatial terms sum to
    // (q_t phi_r - q_r phi_t)^2.
    const double good = cs.q_t * snap.phi_r[i] - cs.q_r * snap.phi_t[i];
    const double w = weight_eval(snap.t, q, params, WeightKind::w);
    density[i] = coef / std::fabs(cs.q_t) * good * good * w;
  }
  return radial_integral(snap.r_nodes, density);
}

PoincareResult poincare_ratio(const FieldSnapshot& snap, double eta, double c,
                              PoincareVariant variant,
                              const std::vector<ConeSample>* cone_per_node,
                              const WeightParams* params) {
  snap.validate();
  if (variant != PoincareVariant::lp2 && !(eta > 0.0))
    throw std::invalid_argument("poincare_ratio: eta must be positive");
  const double t = snap.t;
  const double threshold = 100.0 * (eta + 1.0) * (eta + 1.0) / (eta * eta);
  if (variant == PoincareVariant::lp1 && t < threshold)
    throw std::domain_error("poincare_ratio: lp1 needs t >= 100 (eta+1)^2/eta^2");
  if (variant == PoincareVariant::lp1st && t > threshold)
    throw std::domain_error("poincare_ratio: lp1st needs t <= 100 (eta+1)^2/eta^2");
  if (variant == PoincareVariant::lp2 && (cone_per_node == nullptr || params == nullptr))
    throw std::invalid_argument("poincare_ratio: lp2 needs cone samples and weight params");
  if (variant == PoincareVariant::lp2 && cone_per_node->size() != snap.r_nodes.size())
    throw std::invalid_argument("poincare_ratio: cone samples must match the snapshot");

  const size_t n = snap.r_nodes.size();
  std::vector<double> lhs_density(n, 0.0), rhs_density(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double r = snap.r_nodes[i];
    const double phi2 = snap.phi[i] * snap.phi[i];
    const double grad2 = snap.phi_t[i] * snap.phi_t[i] + snap.phi_r[i] * snap.phi_r[i];
    const double br = bracket(t - r);
    const bool zone_in = r / t >= 1.0 - 0.5 * c;
    const bool zone_ring = r / t >= 1.0 - c && r / t <= 1.0 - 0.5 * c;
    switch (variant) {
      case PoincareVariant::lp1:
        if (r >= t) {
          lhs_density[i] = phi2 / (br * br);
          rhs_density[i] = grad2;
        } else {
          lhs_density[i] = std::pow(br, eta - 1.0) * phi2 * (zone_in ? 1.0 : 0.0);
          rhs_density[i] =
              std::pow(br, eta + 1.0) * (grad2 + (zone_ring ? phi2 / (r * r) : 0.0));
        }
        break;
      case PoincareVariant::lp1st:
        lhs_density[i] = r >= t ? phi2 / (br * br) : std::pow(br, eta - 1.0) * phi2;
        rhs_density[i] = grad2;
        break;
      case PoincareVariant::lp2: {
        const ConeSample& cs = (*cone_per_node)[i];
        const double w = weight_eval(t, cs.q, *params, WeightKind::w);
        lhs_density[i] = zone_in ? cs.q_r * cs.q_r * phi2 * w / (bracket(cs.q) * bracket(cs.q))
                                 : 0.0;
        rhs_density[i] = (grad2 + (zone_ring ? phi2 / (r * r) : 0.0)) * w;
        break;
      }
    }
  }
  PoincareResult res;
  res.lhs = radial_integral(snap.r_nodes, lhs_density);
  res.rhs = radial_integral(snap.r_nodes, rhs_density);
  res.ratio = res.rhs <= 1e-300 ? 0.0 : res.lhs / res.rhs;
  return res;
}

}  // namespace asympwave
