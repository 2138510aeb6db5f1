#pragma once

#include "elasto/dynamics.hpp"
#include "elasto/potential.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace elasto {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  convergence_in_eps,
  energy_audit,
  entropy_rate_audit,
  continuous_dependence,
  reg_gap_sweep,
  surface_gap_sweep,
};

std::string to_string(Experiment e);

/// One sine mode amplitude * sin(2 pi k x).
struct SineMode {
  int k = 1;
  double amplitude = 0.0;
};

struct InitialData {
  std::string family = "sine_modes";  // "sine_modes" or "zero"
  std::vector<SineMode> u_modes{{1, 0.2}, {2, 0.1}};
  std::vector<SineMode> v_modes{{1, 0.1}};

  State build(std::size_t n) const;
};

struct PotentialSpec {
  std::string name = "double_well";  // double_well | quadratic | zero | polynomial
  std::vector<double> coefficients;  // polynomial only, ascending powers
  double wbar = 1.0;

  Potential build() const;
};

/// Every field defaults to the reference convergence study.
struct ExperimentConfig {
  Experiment experiment = Experiment::convergence_in_eps;
  std::size_t n = 1024;
  double T = 0.5;
  double dt = 1e-4;
  double mu = 0.5;
  double gamma = 0.005;
  std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025, 0.0125};
  double eps = 0.05;  // single-eps experiments
  PotentialSpec potential;
  InitialData initial_data;
  std::vector<double> delta_list{1e-2, 1e-3, 1e-4};
  std::string perturb = "u";  // continuous_dependence: perturb u0 or v0
  int perturbation_mode = 3;
  int record_every = 0;  // 0: choose so a run records 100 intervals
  bool dt_control = false;
  bool export_snapshots = false;  // energy_audit: per-snapshot field CSVs + manifest
  std::string kernel = "bump";
  double quad_tolerance = 1e-12;
  int threads = 1;
  std::string output_dir = "elasto_out";

  long steps() const;
  int effective_record_every() const;
  ModelParams local_params() const { return {mu, gamma, std::nullopt}; }
  ModelParams nonlocal_params(double e) const { return {mu, gamma, e}; }
};

/// Throws ConfigError on unknown keys, wrong types, or invalid values.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Checks every invariant: positivity, power-of-two n, strictly decreasing
/// eps_list, eps >= 8/n, admissible gamma, kernel support below 1/2.
void validate(const ExperimentConfig& cfg);

}  // namespace elasto
