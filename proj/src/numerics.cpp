#include "asympwave/numerics.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace asympwave {

std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) return {a};
  std::vector<double> out(n);
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = a + h * i;
  out.back() = b;
  return out;
}

std::vector<double> logspace(double a, double b, int n) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("logspace: endpoints must be positive");
  std::vector<double> out = linspace(std::log(a), std::log(b), n);
  for (double& v : out) v = std::exp(v);
  return out;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order) {
  // B. Fornberg, Math. Comp. 51 (1988): weights for arbitrary node sets.
  const int n = static_cast<int>(nodes.size()) - 1;
  const int m = order;
  std::vector<std::vector<std::vector<double>>> d(
      n + 1, std::vector<std::vector<double>>(n + 1, std::vector<double>(m + 1, 0.0)));
  d[0][0][0] = 1.0;
  double c1 = 1.0;
  for (int i = 1; i <= n; ++i) {
    double c2 = 1.0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      for (int k = 0; k <= std::min(i, m); ++k) {
        d[i][j][k] = ((nodes[i] - x0) * d[i - 1][j][k] -
                      (k > 0 ? k * d[i - 1][j][k - 1] : 0.0)) / c3;
      }
    }
    for (int k = 0; k <= std::min(i, m); ++k) {
      d[i][i][k] = (c1 / c2) * ((k > 0 ? k * d[i - 1][i - 1][k - 1] : 0.0) -
                                (nodes[i - 1] - x0) * d[i - 1][i - 1][k]);
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int j = 0; j <= n; ++j) w[j] = d[n][j][m];
  return w;
}

std::vector<double> fd_derivative(const std::vector<double>& nodes,
                                  const std::vector<double>& values) {
  const int n = static_cast<int>(nodes.size());
  if (n < 5) throw std::invalid_argument("fd_derivative: need at least 5 nodes");
  if (values.size() != nodes.size()) throw std::invalid_argument("fd_derivative: length mismatch");
  for (int i = 1; i < n; ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("fd_derivative: nodes must be strictly increasing");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    int lo = std::clamp(i - 2, 0, n - 5);
    std::vector<double> xs(nodes.begin() + lo, nodes.begin() + lo + 5);
    std::vector<double> w = fd_weights(nodes[i], xs, 1);
    double acc = 0.0;
    for (int j = 0; j < 5; ++j) acc += w[j] * values[lo + j];
    out[i] = acc;
  }
  return out;
}

double simpson(const std::vector<double>& values, double h) {
  const int n = static_cast<int>(values.size());
  if (n < 2) return 0.0;
  int last = (n % 2 == 1) ? n - 1 : n - 2;
  double acc = 0.0;
  for (int i = 0; i + 2 <= last; i += 2)
    acc += (values[i] + 4.0 * values[i + 1] + values[i + 2]) * (h / 3.0);
  if (n % 2 == 0) acc += 0.5 * h * (values[n - 2] + values[n - 1]);
  return acc;
}

namespace {
double simpson_panel(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b, double fb,
             double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_panel(f, a, fa, m, fm, lm, flm);
  const double right = simpson_panel(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson_panel(f, a, fa, b, fb, m, fm);
  return adapt(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

namespace {
// 12-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 6> kGlX = {0.1252334085114689, 0.3678314989981802,
                                        0.5873179542866175, 0.7699026741943047,
                                        0.9041172563704749, 0.9815606342467192};
constexpr std::array<double, 6> kGlW = {0.2491470458134028, 0.2334925365383548,
                                        0.2031674267230659, 0.1600783285433462,
                                        0.1069393259953184, 0.0471753363865118};
}  // namespace

double integrate_gl(const std::function<double(double)>& f, double a, double b, int panels) {
  if (a == b) return 0.0;
  if (panels < 1) panels = 1;
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    const double r = 0.5 * h;
    for (int k = 0; k < 6; ++k)
      acc += r * kGlW[k] * (f(c - r * kGlX[k]) + f(c + r * kGlX[k]));
  }
  return acc;
}

namespace {
void rk4_step(const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& rhs,
              double t, double h, std::vector<double>& y, std::vector<double>& k1,
              std::vector<double>& k2, std::vector<double>& k3, std::vector<double>& k4,
              std::vector<double>& tmp) {
  const size_t n = y.size();
  rhs(t, y, k1);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  rhs(t + 0.5 * h, tmp, k2);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  rhs(t + 0.5 * h, tmp, k3);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  rhs(t + h, tmp, k4);
  for (size_t i = 0; i < n; ++i)
    y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}
}  // namespace

void rk4_fixed(const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& rhs,
               double t0, double t1, int steps, std::vector<double>& y) {
  if (steps < 1) throw std::invalid_argument("rk4_fixed: steps must be >= 1");
  const size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  const double h = (t1 - t0) / steps;
  double t = t0;
  for (int i = 0; i < steps; ++i, t = t0 + (i)*h)
    rk4_step(rhs, t, h, y, k1, k2, k3, k4, tmp);
}

void rk4_adaptive(const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& rhs,
                  double t0, double t1, std::vector<double>& y,
                  double abs_tol, double rel_tol,
                  const std::function<double(double, const std::vector<double>&)>& max_step) {
  if (t0 == t1) return;
  const size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  std::vector<double> y_big, y_half;
  const double dir = (t1 > t0) ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::max(1e-8, std::fabs(t1 - t0) / 16.0);
  int guard = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++guard > 2000000) throw std::runtime_error("rk4_adaptive: step count exceeded");
    if (max_step) {
      const double cap = std::max(1e-8, max_step(t, y));
      if (std::fabs(h) > cap) h = dir * cap;
    }
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    y_big = y;
    rk4_step(rhs, t, h, y_big, k1, k2, k3, k4, tmp);
    y_half = y;
    rk4_step(rhs, t, 0.5 * h, y_half, k1, k2, k3, k4, tmp);
    rk4_step(rhs, t + 0.5 * h, 0.5 * h, y_half, k1, k2, k3, k4, tmp);
    double err = 0.0, scale = 0.0;
    for (size_t i = 0; i < n; ++i) {
      err = std::max(err, std::fabs(y_half[i] - y_big[i]));
      scale = std::max(scale, std::fabs(y_half[i]));
    }
    const double tol = abs_tol + rel_tol * scale;
    if (err <= tol || std::fabs(h) < 1e-13 * std::fabs(t1 - t0)) {
      t += h;
      // Fifth-order update from the two fourth-order estimates.
      for (size_t i = 0; i < n; ++i) y[i] = y_half[i] + (y_half[i] - y_big[i]) / 15.0;
      if (err < 0.1 * tol) h *= 2.0;
    } else {
      h *= 0.5;
    }
  }
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw std::runtime_error("bisect: endpoints do not bracket a root");
  for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares_line: need >= 2 matched samples");
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (std::fabs(det) < 1e-300) throw std::invalid_argument("least_squares_line: degenerate abscissae");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

std::vector<double> sym_eigenvalues(const std::vector<double>& a_in, int n) {
  std::vector<double> a = a_in;
  auto at = [&](int i, int j) -> double& { return a[i * n + j]; };
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double tval = (theta >= 0 ? 1.0 : -1.0) /
                            (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tval * tval + 1.0);
        const double s = tval * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end(),
            [](double x, double y) { return std::fabs(x) > std::fabs(y); });
  return ev;
}

int worker_count() {
  if (const char* env = std::getenv("ASYMPWAVE_THREADS")) {
    const int k = std::atoi(env);
    if (k >= 1) return k;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), std::max(1, n));
  if (workers == 1 || n < 4) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace asympwave
