#include <doctest.h>

#include <cmath>

#include "asympwave/energy.hpp"

using namespace asympwave;

namespace {

WeightParams default_weights() {
  WeightParams p;
  p.gamma1 = 2.4;
  p.gamma2 = 0.2;
  p.c0 = 4.0;
  p.epsilon = 0.02;
  p.delta = 0.5;
  return p;
}

// A smoothed indicator of [1, 2] used for the exact-integral check.
double smooth_plateau(double r, int deriv) {
  auto s = [](double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
  };
  const double win = 0.02;
  if (deriv == 0) return s((r - 1.0 + win) / win) * s((2.0 + win - r) / win);
  const double h = 1e-6;
  return (smooth_plateau(r + h, 0) - smooth_plateau(r - h, 0)) / (2 * h);
}

}  // namespace

TEST_CASE("weight parameter validation mirrors the range conditions") {
  WeightParams p = default_weights();
  CHECK_NOTHROW(p.validate(1.5, 2.5));
  p.gamma1 = 5.0;
  CHECK_THROWS(p.validate(1.5, 2.5));
  p = default_weights();
  p.gamma2 = 0.6;
  CHECK_THROWS(p.validate(1.5, 2.5));
  p = default_weights();
  p.c0 = 1.0;
  CHECK_THROWS(p.validate(1.5, 2.5));
}

TEST_CASE("weights: plug-in values and limits") {
  const WeightParams p = default_weights();
  const double t = 1000.0;

  // q = 0
  CHECK(weight_eval(t, 0.0, p, WeightKind::m) == 1.0);
  CHECK(weight_eval(t, 0.0, p, WeightKind::sigma) == 1.0);
  CHECK(weight_eval(t, 0.0, p, WeightKind::w0) == 1.0);
  CHECK(weight_eval(t, 0.0, p, WeightKind::w) ==
        doctest::Approx(std::pow(t, p.c0 * p.epsilon)).epsilon(1e-12));

  // q = -1, gamma1 = 2.4: m = 2^2.4
  CHECK(weight_eval(t, -1.0, p, WeightKind::m) ==
        doctest::Approx(std::pow(2.0, 2.4)).epsilon(1e-13));

  // limits for |q| -> inf, sampled far out (sigma ~ <q>^{-gamma2} drifts in
  // slowly, so probe at 1e9 with a 2% window)
  CHECK(weight_eval(t, 1e9, p, WeightKind::sigma) < 0.02);
  CHECK(weight_eval(t, 1e9, p, WeightKind::w) == doctest::Approx(1.0).epsilon(2e-2));
  CHECK(weight_eval(t, -1e9, p, WeightKind::sigma) == doctest::Approx(2.0).epsilon(2e-2));
  const double w_far = weight_eval(t, -1e9, p, WeightKind::w);
  const double m_far = weight_eval(t, -1e9, p, WeightKind::m);
  CHECK(w_far / m_far ==
        doctest::Approx(std::pow(t, 2.0 * p.c0 * p.epsilon)).epsilon(2e-2));

  // w needs t >= 1/eps
  CHECK_THROWS(weight_eval(10.0, 0.0, p, WeightKind::w));
  // w >= 1 on q <= 0 for t >= 1/eps
  for (double q : linspace(-50.0, 0.0, 21))
    CHECK(weight_eval(t, q, p, WeightKind::w) >= 1.0);
}

TEST_CASE("E_u: zero field, exact integral with unit weight, scaling") {
  const WeightParams p = default_weights();
  const Direction dir;
  const double t = 100.0;
  const int n = 4001;

  FieldSnapshot snap;
  snap.t = t;
  snap.r_nodes = linspace(0.25, 3.0, n);
  snap.phi.assign(n, 0.0);
  snap.phi_t.assign(n, 0.0);
  snap.phi_r.assign(n, 0.0);
  std::vector<Metric4> mink(n, minkowski());
  std::vector<double> qv(n, 0.0);
  std::vector<double> unit_w(n, 1.0);
  CHECK(energy_Eu(snap, mink, dir, qv, p, &unit_w) == 0.0);

  // phi_r = smoothed 1_{[1,2]}, phi_t = 0, w == 1:
  // E_u = 4 pi int_1^2 r^2 dr = 28 pi / 3.
  for (int i = 0; i < n; ++i) snap.phi_r[i] = smooth_plateau(snap.r_nodes[i], 0);
  snap.compact_support = false;
  const double e = energy_Eu(snap, mink, dir, qv, p, &unit_w);
  CHECK(e == doctest::Approx(28.0 * M_PI / 3.0).epsilon(2e-2));

  // quadratic scaling
  FieldSnapshot snap2 = snap;
  for (int i = 0; i < n; ++i) snap2.phi_r[i] *= 3.0;
  CHECK(energy_Eu(snap2, mink, dir, qv, p, &unit_w) == doctest::Approx(9.0 * e).epsilon(1e-12));
}

TEST_CASE("E_u coercivity under near-Minkowski metrics") {
  const WeightParams p = default_weights();
  const Direction dir;
  const double t = 100.0;
  FieldSnapshot snap = random_snapshot(99, t, 20.0, 2001);
  snap.compact_support = true;
  const int n = static_cast<int>(snap.r_nodes.size());
  std::vector<double> qv(n);
  for (int i = 0; i < n; ++i) qv[i] = snap.r_nodes[i] - t;

  std::vector<Metric4> mink(n, minkowski());
  const double base = energy_Eu(snap, mink, dir, qv, p);

  const double eps = 0.02;
  std::vector<Metric4> bent(n);
  for (int i = 0; i < n; ++i) {
    Metric4 g = minkowski();
    const double bump = eps * std::sin(0.1 * snap.r_nodes[i]);
    g[0][0] += bump;
    for (int a = 1; a <= 3; ++a) g[a][a] -= 0.5 * bump;
    bent[i] = g;
  }
  const double e = energy_Eu(snap, bent, dir, qv, p);
  CHECK(e >= (1.0 - 4.0 * eps) * base);
  CHECK(e <= (1.0 + 4.0 * eps) * base);

  // degenerate metric flagged
  std::vector<Metric4> bad(n, minkowski());
  for (auto& g : bad) g[0][0] = 1.0;
  CHECK_THROWS(energy_Eu(snap, bad, dir, qv, p));
}

TEST_CASE("E_q: zero field, flat chart structure, outgoing null combination") {
  const WeightParams p = default_weights();
  const double t = 200.0;
  const int n = 2001;
  FieldSnapshot snap;
  snap.t = t;
  snap.r_nodes = linspace(t - 20.0, t + 20.0, n);
  snap.phi.assign(n, 0.0);
  snap.phi_t.assign(n, 0.0);
  snap.phi_r.assign(n, 0.0);
  std::vector<ConeSample> cone(n);
  for (int i = 0; i < n; ++i) {
    cone[i].t = t;
    cone[i].r = snap.r_nodes[i];
    cone[i].q = snap.r_nodes[i] - t;
    cone[i].q_t = -1.0;
    cone[i].q_r = 1.0;
  }
  CHECK(energy_Eq(snap, cone, p) == 0.0);

  // outgoing field phi_r = -phi_t: the transported combination vanishes
  FieldSnapshot out = random_snapshot(5, t, 15.0, n);
  for (int i = 0; i < n; ++i) out.phi_t[i] = -out.phi_r[i];
  std::vector<ConeSample> cone2(n);
  for (int i = 0; i < n; ++i) {
    cone2[i].q = out.r_nodes[i] - t;
    cone2[i].q_t = -1.0;
    cone2[i].q_r = 1.0;
  }
  CHECK(energy_Eq(out, cone2, p) == doctest::Approx(0.0).scale(1.0));

  // q_t >= 0 rejected
  cone[0].q_t = 0.5;
  FieldSnapshot nz = random_snapshot(6, t, 15.0, n);
  CHECK_THROWS(energy_Eq(nz, cone, p));
}

TEST_CASE("poincare ratios: zero field, domain preconditions, stability") {
  const double c = 0.1;
  FieldSnapshot zero;
  zero.t = 400.0;
  zero.r_nodes = linspace(380.0, 420.0, 101);
  zero.phi.assign(101, 0.0);
  zero.phi_t.assign(101, 0.0);
  zero.phi_r.assign(101, 0.0);
  CHECK(poincare_ratio(zero, 2.5, c, PoincareVariant::lp1).ratio == 0.0);

  // lp1 requires t >= 100 (eta+1)^2/eta^2 (= 196 for eta = 2.5)
  FieldSnapshot low = random_snapshot(3, 150.0, 10.0, 801);
  CHECK_THROWS(poincare_ratio(low, 2.5, c, PoincareVariant::lp1));
  // lp1st requires small t relative to the same threshold
  FieldSnapshot high = random_snapshot(3, 2000.0, 10.0, 801);
  CHECK_THROWS(poincare_ratio(high, 1.2, c, PoincareVariant::lp1st));

  // gaussian-like profile: finite ratio, stable under resolution doubling
  auto ratio_at = [&](int n) {
    FieldSnapshot snap;
    snap.t = 200.0;
    snap.r_nodes = linspace(170.0, 230.0, n);
    snap.phi.resize(n);
    snap.phi_t.assign(n, 0.0);
    snap.phi_r.resize(n);
    for (int i = 0; i < n; ++i) {
      const double y = snap.r_nodes[i] - snap.t;
      snap.phi[i] = std::exp(-y * y);
      snap.phi_r[i] = -2.0 * y * std::exp(-y * y);
    }
    snap.compact_support = false;
    return poincare_ratio(snap, 2.5, c, PoincareVariant::lp1).ratio;
  };
  const double r1 = ratio_at(2001), r2 = ratio_at(4001);
  CHECK(std::isfinite(r1));
  CHECK(std::fabs(r2 - r1) < 0.10 * r1);

  // a family of random smooth snapshots stays below a single constant
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    FieldSnapshot snap = random_snapshot(1000 + k, 2000.0, 20.0, 1501);
    worst = std::max(worst, poincare_ratio(snap, 2.5, c, PoincareVariant::lp1).ratio);
  }
  CHECK(std::isfinite(worst));
  CHECK(worst > 0.0);
}

TEST_CASE("random snapshots are deterministic in the seed") {
  const FieldSnapshot a = random_snapshot(42, 300.0, 15.0, 501);
  const FieldSnapshot b = random_snapshot(42, 300.0, 15.0, 501);
  for (size_t i = 0; i < a.phi.size(); ++i) CHECK(a.phi[i] == b.phi[i]);
  const FieldSnapshot other = random_snapshot(43, 300.0, 15.0, 501);
  bool differ = false;
  for (size_t i = 0; i < a.phi.size(); ++i) differ = differ || a.phi[i] != other.phi[i];
  CHECK(differ);
}
