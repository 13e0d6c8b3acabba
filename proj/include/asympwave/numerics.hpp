// Shared numerical kernels: grids, finite differences, quadrature,
// ODE stepping, fitting, small linear algebra, parallel loops.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asympwave {

// <q> = 1 + |q|, the bracket used by all weights and decay envelopes.
inline double bracket(double q) { return 1.0 + std::fabs(q); }

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);  // log-uniform in [a,b], a,b > 0

// Finite-difference weights on arbitrary nodes (Fornberg's algorithm).
// Returns weights w such that f^(m)(x0) ~= sum_i w[i] * f(nodes[i]).
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order);

// d/dq of values sampled on strictly increasing nodes, 5-point stencils
// (4th order on smooth meshes, one-sided at the ends).
std::vector<double> fd_derivative(const std::vector<double>& nodes,
                                  const std::vector<double>& values);

// Composite Simpson on uniformly spaced samples (n odd preferred; a trapezoid
// patch covers a trailing even interval).
double simpson(const std::vector<double>& values, double h);

// Adaptive Simpson of f on [a,b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 40);

// Fixed-node Gauss-Legendre rule of given panel count, 12 points per panel.
// The node layout depends only on (a,b,panels), so the quadrature error is a
// smooth functional of the integrand.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int panels);

// Classical RK4 with a fixed number of steps; y may have any dimension.
void rk4_fixed(const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& rhs,
               double t0, double t1, int steps, std::vector<double>& y);

// RK4 with step doubling and Richardson control; integrates t0 -> t1
// (either direction) keeping the local error below abs_tol + rel_tol*|y|.
// max_step, when given, caps |h| as a function of the current state so that
// localized structure cannot be jumped over silently.
void rk4_adaptive(const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& rhs,
                  double t0, double t1, std::vector<double>& y,
                  double abs_tol = 1e-12, double rel_tol = 1e-12,
                  const std::function<double(double, const std::vector<double>&)>& max_step = {});

// Bisection for f(r) = 0 on [lo, hi]; f(lo), f(hi) must bracket a root.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter = 200);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};
LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

// Eigenvalues of a symmetric n x n matrix (row-major), Jacobi sweeps.
// Returns eigenvalues sorted by decreasing absolute value.
std::vector<double> sym_eigenvalues(const std::vector<double>& a, int n);

// Runs fn(i) for i in [0, n) on up to ASYMPWAVE_THREADS workers (defaults to
// hardware concurrency). Work is split in contiguous blocks so writes by
// index stay deterministic.
void parallel_for(int n, const std::function<void(int)>& fn);
int worker_count();

}  // namespace asympwave
