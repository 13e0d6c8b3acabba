// JSON run configuration with range validation, and the JSON/CSV report
// emitters shared by the command-line driver.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "asympwave/energy.hpp"
#include "asympwave/reduced.hpp"

namespace asympwave {

struct RunConfig {
  // wave system
  std::string system_name = "semilinear_ut2";
  double cs1 = 0.0;

  // scattering data
  std::string scattering_kind = "gaussian";
  double scattering_amp = -1.0;
  double scattering_p = 2.2;  // polynomial_decay exponent
  std::vector<double> table_q, table_values;

  // analysis parameters
  double epsilon = 0.02;
  double delta = 0.0;  // 0: default to delta0 / 2
  double gamma_plus = 1.5;
  double gamma_minus = 2.5;
  double gamma1 = 2.4;
  double gamma2 = 0.2;
  double c0 = 4.0;
  double cutoff_c = 0.1;
  double lambda0 = 0.1;

  // stage grids
  double adm_s_max = 10.0;
  double adm_q_span = 12.0;
  int adm_n_s = 64;
  int adm_n_q = 512;
  double scan_t_lo = 50.0;
  double scan_t_hi = 5000.0;
  int scan_n_t = 9;
  std::vector<double> scan_q_values = {-2.0, -1.0, 0.0, 1.0, 2.0};
  double shock_q_lo = -12.0;
  double shock_q_hi = 12.0;
  int shock_n_nodes = 4096;
  std::string shock_family = "burgers";
  std::string shock_profile = "neg_sin";  // smoothed_step | neg_sin | scattering
  double shock_step_lo = -1.0, shock_step_hi = 1.0;
  double shock_expected = 0.0;  // 0: no expectation checked
  double shock_rel_tol = 0.02;
  double backward_T = 0.0;  // 0: 4 / epsilon
  double backward_dr = 0.05;
  double backward_cfl = 0.9;
  double backward_r_max = 0.0;
  bool backward_convergence_check = true;
  int poincare_seeds = 20;
  int poincare_nodes = 2001;
  int reduced_steps = 256;
  int reduced_n_q = 512;
  double reduced_q_span = 8.0;
  double reduced_s_span = 2.0;

  std::string out_dir = "out";
  std::uint64_t seed = 20240801;

  nlohmann::json echo;  // the fully-resolved configuration

  ScatteringData make_scattering() const;
  ReducedSolution make_solution() const;
  OpticalParams make_optical(const ReducedSolution& sol) const;
  WeightParams make_weights() const;
};

// Parses and validates; throws std::invalid_argument listing every violated
// range condition.
RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});
RunConfig config_from_json(nlohmann::json j);

}  // namespace asympwave
