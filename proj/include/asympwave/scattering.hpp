// Radiation-field seeds A(q, w) with controlled decay in q.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "asympwave/model.hpp"

namespace asympwave {

struct ScatteringData {
  // a-th q-derivative of A at (q, w); a <= 3.
  std::function<double(double q, const Direction& w, int a)> A;
  // Antiderivative int_{-inf}^q A(p, w) dp when a closed form exists.
  std::function<double(double q, const Direction& w)> antiderivative;
  double gamma_plus = 1.5;   // > 1
  double gamma_minus = 2.5;  // > 2
  double q_support_cut = 6.0;
  bool radial = true;  // independent of w
  std::string kind;

  double operator()(double q, const Direction& w) const { return A(q, w, 0); }

  // Fitted constants max |d_q^a A| * <q>^{a+gamma_sgn(q)} on a sample grid,
  // one entry per derivative order 0..3.
  std::vector<double> decay_constants(int n_samples = 2001) const;
};

// A = amp * exp(-q^2); antiderivative via erf.
ScatteringData gaussian_data(double amp, double gamma_plus = 1.5, double gamma_minus = 2.5);

// A = amp * (1 + q^2)^(-p/2): smooth, decays like <q>^-p on both sides.
ScatteringData polynomial_decay_data(double amp, double p, double gamma_plus = 1.5,
                                     double gamma_minus = 2.5);

// Cubic-interpolated table on strictly increasing q samples; zero outside.
ScatteringData table_data(const std::vector<double>& q_samples,
                          const std::vector<double>& values, double gamma_plus = 1.5,
                          double gamma_minus = 2.5);

}  // namespace asympwave
