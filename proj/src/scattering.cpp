#include "asympwave/scattering.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace asympwave {

std::vector<double> ScatteringData::decay_constants(int n_samples) const {
  const double span = std::max(q_support_cut * 4.0, 40.0);
  const std::vector<double> qs = linspace(-span, span, n_samples);
  const Direction w;
  std::vector<double> c(4, 0.0);
  for (double q : qs) {
    const double gamma = q >= 0.0 ? gamma_plus : gamma_minus;
    for (int a = 0; a <= 3; ++a)
      c[a] = std::max(c[a], std::fabs(A(q, w, a)) * std::pow(bracket(q), a + gamma));
  }
  return c;
}

ScatteringData gaussian_data(double amp, double gamma_plus, double gamma_minus) {
  ScatteringData data;
  data.kind = "gaussian";
  data.gamma_plus = gamma_plus;
  data.gamma_minus = gamma_minus;
  data.radial = true;
  // exp(-36) ~ 2.3e-16, below the support threshold 1e-14.
  data.q_support_cut = 6.0;
  data.A = [amp](double q, const Direction&, int a) {
    const double e = std::exp(-q * q);
    switch (a) {
      case 0: return amp * e;
      case 1: return amp * (-2.0 * q) * e;
      case 2: return amp * (4.0 * q * q - 2.0) * e;
      case 3: return amp * (12.0 * q - 8.0 * q * q * q) * e;
      default: throw std::invalid_argument("gaussian_data: derivative order > 3");
    }
  };
  data.antiderivative = [amp](double q, const Direction&) {
    return amp * 0.5 * std::sqrt(M_PI) * (1.0 + std::erf(q));
  };
  return data;
}

ScatteringData polynomial_decay_data(double amp, double p, double gamma_plus,
                                     double gamma_minus) {
  if (p <= 1.0) throw std::invalid_argument("polynomial_decay_data: need p > 1");
  ScatteringData data;
  data.kind = "polynomial_decay";
  data.gamma_plus = gamma_plus;
  data.gamma_minus = gamma_minus;
  data.radial = true;
  data.q_support_cut = std::pow(1e14 * std::fabs(amp) + 1.0, 1.0 / p);
  data.A = [amp, p](double q, const Direction&, int a) {
    const double s = 1.0 + q * q;
    const double base = std::pow(s, -0.5 * p);
    switch (a) {
      case 0: return amp * base;
      case 1: return amp * (-p * q) * base / s;
      case 2: return amp * p * ((p + 1.0) * q * q - 1.0) * base / (s * s);
      case 3: return amp * p * q * (3.0 * (p + 2.0) - (p + 2.0) * (p + 4.0) * q * q / s) * base / (s * s);
      default: throw std::invalid_argument("polynomial_decay_data: derivative order > 3");
    }
  };
  data.antiderivative = nullptr;
  return data;
}

namespace {
// Natural cubic spline with zero boundary values and slopes.
struct Spline {
  std::vector<double> x, a, b, c, d;  // piece i: a+b*t+c*t^2+d*t^3, t = q-x[i]

  double eval(double q, int deriv) const {
    if (x.empty() || q <= x.front() || q >= x.back()) return 0.0;
    int lo = 0, hi = static_cast<int>(x.size()) - 1;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (x[mid] <= q ? lo : hi) = mid;
    }
    const double t = q - x[lo];
    switch (deriv) {
      case 0: return a[lo] + t * (b[lo] + t * (c[lo] + t * d[lo]));
      case 1: return b[lo] + t * (2.0 * c[lo] + 3.0 * t * d[lo]);
      case 2: return 2.0 * c[lo] + 6.0 * t * d[lo];
      case 3: return 6.0 * d[lo];
      default: throw std::invalid_argument("table spline: derivative order > 3");
    }
  }
};

Spline build_spline(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  if (n < 3) throw std::invalid_argument("table_data: need at least 3 samples");
  for (int i = 1; i < n; ++i)
    if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("table_data: q samples must increase");
  // Solve for second derivatives with natural boundary conditions.
  std::vector<double> h(n - 1), alpha(n, 0.0), l(n, 1.0), mu(n, 0.0), z(n, 0.0), m(n, 0.0);
  for (int i = 0; i < n - 1; ++i) h[i] = xs[i + 1] - xs[i];
  for (int i = 1; i < n - 1; ++i)
    alpha[i] = 3.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
  for (int i = 1; i < n - 1; ++i) {
    l[i] = 2.0 * (xs[i + 1] - xs[i - 1]) - h[i - 1] * mu[i - 1];
    mu[i] = h[i] / l[i];
    z[i] = (alpha[i] - h[i - 1] * z[i - 1]) / l[i];
  }
  for (int i = n - 2; i >= 0; --i) m[i] = z[i] - mu[i] * m[i + 1];
  Spline sp;
  sp.x = xs;
  sp.a.resize(n - 1);
  sp.b.resize(n - 1);
  sp.c.resize(n - 1);
  sp.d.resize(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    sp.a[i] = ys[i];
    sp.c[i] = m[i];
    sp.d[i] = (m[i + 1] - m[i]) / (3.0 * h[i]);
    sp.b[i] = (ys[i + 1] - ys[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 3.0;
  }
  return sp;
}
}  // namespace

ScatteringData table_data(const std::vector<double>& q_samples,
                          const std::vector<double>& values, double gamma_plus,
                          double gamma_minus) {
  if (q_samples.size() != values.size())
    throw std::invalid_argument("table_data: sample length mismatch");
  auto spline = std::make_shared<Spline>(build_spline(q_samples, values));
  ScatteringData data;
  data.kind = "table";
  data.gamma_plus = gamma_plus;
  data.gamma_minus = gamma_minus;
  data.radial = true;
  data.q_support_cut = std::max(std::fabs(q_samples.front()), std::fabs(q_samples.back()));
  data.A = [spline](double q, const Direction&, int a) { return spline->eval(q, a); };
  data.antiderivative = nullptr;
  return data;
}

}  // namespace asympwave
