#include "asympwave/config.hpp"

#include <fstream>
#include <sstream>

namespace asympwave {

namespace {

template <typename T>
void pull(const nlohmann::json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

void apply_override(nlohmann::json& j, const std::string& expr) {
  const auto eq = expr.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override must look like key=value: " + expr);
  const std::string key = expr.substr(0, eq);
  const std::string val = expr.substr(eq + 1);
  nlohmann::json* node = &j;
  std::stringstream path(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(path, part, '.')) parts.push_back(part);
  for (size_t i = 0; i + 1 < parts.size(); ++i) node = &((*node)[parts[i]]);
  nlohmann::json parsed = nlohmann::json::parse(val, nullptr, false);
  (*node)[parts.back()] = parsed.is_discarded() ? nlohmann::json(val) : parsed;
}

}  // namespace

ScatteringData RunConfig::make_scattering() const {
  if (scattering_kind == "gaussian")
    return gaussian_data(scattering_amp, gamma_plus, gamma_minus);
  if (scattering_kind == "polynomial_decay")
    return polynomial_decay_data(scattering_amp, scattering_p, gamma_plus, gamma_minus);
  if (scattering_kind == "table")
    return table_data(table_q, table_values, gamma_plus, gamma_minus);
  throw std::invalid_argument("unknown scattering kind '" + scattering_kind + "'");
}

ReducedSolution RunConfig::make_solution() const {
  const ScatteringData A = make_scattering();
  if (system_name == "semilinear_ut2")
    return closed_form_semilinear(A, [](const Direction&) { return 1.0; });
  if (system_name == "quasilinear_grad")
    return closed_form_quasilinear_grad(A, [](const Direction&) { return 1.0; });
  if (system_name == "euler") return closed_form_euler(A, cs1);
  throw std::invalid_argument("unknown system '" + system_name + "'");
}

OpticalParams RunConfig::make_optical(const ReducedSolution& sol) const {
  OpticalParams p;
  p.epsilon = epsilon;
  if (delta > 0.0) {
    p.delta = delta;
  } else {
    // Auto choice: center the slow-time window of the scan on s = 0, i.e.
    // s(t) = eps ln t - delta crosses zero at the geometric midpoint of
    // [t_lo, t_hi]; clamped into (0, delta0).
    const double centered = epsilon * std::log(std::sqrt(scan_t_lo * scan_t_hi));
    p.delta = std::clamp(centered, 0.05 * sol.delta0, 0.9 * sol.delta0);
  }
  p.validate(sol.delta0);
  return p;
}

WeightParams RunConfig::make_weights() const {
  WeightParams p;
  p.gamma1 = gamma1;
  p.gamma2 = gamma2;
  p.c0 = c0;
  p.epsilon = epsilon;
  p.delta = delta;
  return p;
}

RunConfig config_from_json(nlohmann::json j) {
  RunConfig cfg;
  if (j.contains("system")) {
    if (j["system"].is_string()) {
      cfg.system_name = j["system"].get<std::string>();
    } else {
      pull(j["system"], "name", cfg.system_name);
      pull(j["system"], "cs1", cfg.cs1);
    }
  }
  if (j.contains("scattering")) {
    auto& s = j["scattering"];
    pull(s, "kind", cfg.scattering_kind);
    pull(s, "amp", cfg.scattering_amp);
    pull(s, "p", cfg.scattering_p);
    pull(s, "q", cfg.table_q);
    pull(s, "values", cfg.table_values);
  }
  pull(j, "epsilon", cfg.epsilon);
  pull(j, "delta", cfg.delta);
  pull(j, "gamma_plus", cfg.gamma_plus);
  pull(j, "gamma_minus", cfg.gamma_minus);
  pull(j, "gamma1", cfg.gamma1);
  pull(j, "gamma2", cfg.gamma2);
  pull(j, "c0", cfg.c0);
  pull(j, "c", cfg.cutoff_c);
  pull(j, "lambda0", cfg.lambda0);
  pull(j, "seed", cfg.seed);
  pull(j, "out", cfg.out_dir);
  if (j.contains("grids")) {
    auto& g = j["grids"];
    if (g.contains("admissibility")) {
      pull(g["admissibility"], "s_max", cfg.adm_s_max);
      pull(g["admissibility"], "q_span", cfg.adm_q_span);
      pull(g["admissibility"], "n_s", cfg.adm_n_s);
      pull(g["admissibility"], "n_q", cfg.adm_n_q);
    }
    if (g.contains("scan")) {
      pull(g["scan"], "t_lo", cfg.scan_t_lo);
      pull(g["scan"], "t_hi", cfg.scan_t_hi);
      pull(g["scan"], "n_t", cfg.scan_n_t);
      pull(g["scan"], "q_values", cfg.scan_q_values);
    }
    if (g.contains("shock")) {
      pull(g["shock"], "q_lo", cfg.shock_q_lo);
      pull(g["shock"], "q_hi", cfg.shock_q_hi);
      pull(g["shock"], "n_nodes", cfg.shock_n_nodes);
      pull(g["shock"], "family", cfg.shock_family);
      pull(g["shock"], "profile", cfg.shock_profile);
      pull(g["shock"], "step_lo", cfg.shock_step_lo);
      pull(g["shock"], "step_hi", cfg.shock_step_hi);
      pull(g["shock"], "expected_s_star", cfg.shock_expected);
      pull(g["shock"], "rel_tol", cfg.shock_rel_tol);
    }
    if (g.contains("backward")) {
      pull(g["backward"], "T", cfg.backward_T);
      pull(g["backward"], "dr", cfg.backward_dr);
      pull(g["backward"], "cfl", cfg.backward_cfl);
      pull(g["backward"], "r_max", cfg.backward_r_max);
      pull(g["backward"], "convergence_check", cfg.backward_convergence_check);
    }
    if (g.contains("poincare")) {
      pull(g["poincare"], "seeds", cfg.poincare_seeds);
      pull(g["poincare"], "nodes", cfg.poincare_nodes);
    }
    if (g.contains("reduced")) {
      pull(g["reduced"], "steps", cfg.reduced_steps);
      pull(g["reduced"], "n_q", cfg.reduced_n_q);
      pull(g["reduced"], "q_span", cfg.reduced_q_span);
      pull(g["reduced"], "s_span", cfg.reduced_s_span);
    }
  }

  // Range validation; collect every violation so a bad file reports them all.
  std::vector<std::string> violations;
  if (!(cfg.gamma_plus > 1.0))
    violations.push_back("gamma_plus must satisfy gamma_plus > 1");
  if (!(cfg.gamma_minus > 2.0))
    violations.push_back("gamma_minus must satisfy gamma_minus > 2");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
    violations.push_back("epsilon must lie in (0, 1)");
  if (!(cfg.cutoff_c > 0.0 && cfg.cutoff_c < 0.25))
    violations.push_back("c must lie in (0, 1/4)");
  if (!(cfg.lambda0 > 0.0 && cfg.lambda0 < 0.5))
    violations.push_back("lambda0 must lie in (0, 1/2)");
  const double g1_cap = std::min(2.0 * (cfg.gamma_minus - 1.0), 4.0);
  if (!(cfg.gamma1 > 2.0 && cfg.gamma1 < g1_cap)) {
    std::ostringstream os;
    os << "gamma1 outside (2, min{2(gamma_minus-1), 4}) = (2, " << g1_cap << ")";
    violations.push_back(os.str());
  }
  const double g2_cap =
      std::min({cfg.gamma_minus - 2.0, cfg.gamma_plus - 1.0, 0.5});
  if (!(cfg.gamma2 > 0.0 && cfg.gamma2 < g2_cap)) {
    std::ostringstream os;
    os << "gamma2 outside (0, min{gamma_minus-2, gamma_plus-1, 1/2}) = (0, " << g2_cap << ")";
    violations.push_back(os.str());
  }
  if (!(cfg.c0 >= 2.0)) violations.push_back("c0 must be >= 2");
  if (!violations.empty()) {
    std::string msg = "configuration rejected:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw std::invalid_argument(msg);
  }

  cfg.echo = j;
  cfg.echo["system"] = {{"name", cfg.system_name}, {"cs1", cfg.cs1}};
  cfg.echo["scattering"] = {{"kind", cfg.scattering_kind},
                            {"amp", cfg.scattering_amp},
                            {"p", cfg.scattering_p}};
  cfg.echo["epsilon"] = cfg.epsilon;
  cfg.echo["gamma_plus"] = cfg.gamma_plus;
  cfg.echo["gamma_minus"] = cfg.gamma_minus;
  cfg.echo["gamma1"] = cfg.gamma1;
  cfg.echo["gamma2"] = cfg.gamma2;
  cfg.echo["c0"] = cfg.c0;
  cfg.echo["c"] = cfg.cutoff_c;
  cfg.echo["lambda0"] = cfg.lambda0;
  cfg.echo["seed"] = cfg.seed;
  return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("config parse error in '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config root must be a JSON object");
  for (const auto& ov : overrides) apply_override(j, ov);
  return config_from_json(std::move(j));
}

}  // namespace asympwave
