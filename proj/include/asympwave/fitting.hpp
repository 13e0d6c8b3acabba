// Power-law decay fits on positive samples: least squares in (ln t, ln y).
#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "asympwave/numerics.hpp"

namespace asympwave {

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;  // ln-amplitude
  double rms_residual = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  int n_samples = 0;
};

inline DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 5) throw std::invalid_argument("fit_decay_exponent: need >= 5 samples");
  double t_lo = samples.front().first, t_hi = samples.front().first;
  std::vector<double> x, y;
  for (const auto& [t, v] : samples) {
    if (!(v > 0.0)) throw std::invalid_argument("fit_decay_exponent: samples must be positive");
    if (!(t > 0.0)) throw std::invalid_argument("fit_decay_exponent: abscissae must be positive");
    t_lo = std::min(t_lo, t);
    t_hi = std::max(t_hi, t);
    x.push_back(std::log(t));
    y.push_back(std::log(v));
  }
  if (t_hi < 4.0 * t_lo * (1.0 - 1e-9))
    throw std::invalid_argument("fit_decay_exponent: need t_hi >= 4 t_lo");
  const LineFit fit = least_squares_line(x, y);
  DecayFit out;
  out.exponent = fit.slope;
  out.intercept = fit.intercept;
  out.rms_residual = fit.rms_residual;
  out.t_lo = t_lo;
  out.t_hi = t_hi;
  out.n_samples = static_cast<int>(samples.size());
  return out;
}

}  // namespace asympwave
