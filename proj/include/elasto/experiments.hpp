#pragma once

#include "elasto/config.hpp"
#include "elasto/entropy.hpp"
#include "elasto/fit.hpp"
#include "elasto/integrator.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace elasto {

/// Tolerances asserted by the experiments.
namespace tol {
inline constexpr double energy_residual = 1e-6;   // relative to 1 + E(0)
inline constexpr double energy_growth = 1e-8;     // relative to 1 + E(0)
inline constexpr double convergence_order = 0.9;
inline constexpr double convergence_r2 = 0.98;
inline constexpr double proven_order_floor = 0.5;
inline constexpr double monotonicity_slack = 0.05;
inline constexpr double h1_spread = 4.0;
inline constexpr double dt_control = 0.02;
inline constexpr double rate_identity = 1e-3;
inline constexpr double rate_bound_slack = 1e-3;
inline constexpr double dependence_spread = 2.0;
inline constexpr double reg_gap_floor = 0.5;
inline constexpr double reg_gap_expected = 1.9;
inline constexpr double surface_gap_floor = 0.9;
}  // namespace tol

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to per-index slots so aggregation order stays fixed.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

struct ConvergenceRow {
  double eps = 0.0;
  double sup_t_sq_err_u = 0.0;
  double sup_t_sq_err_v = 0.0;
  double sup_t_sq_err_total = 0.0;
  double energy_residual_max = 0.0;  // relative to 1 + E(0)
  double energy_growth_max = 0.0;    // relative to 1 + E(0)
  double max_h1 = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::optional<OrderFit> fit;  // absent with fewer than 3 rows or a zero error
  double local_energy_residual_max = 0.0;
  double local_energy_growth_max = 0.0;
  double local_max_h1 = 0.0;
  EnergyLedger local_ledger;
  std::vector<EnergyLedger> nonlocal_ledgers;

  /// max/min of max_t |u^eps|_{H^1} across rows.
  double h1_spread() const;
  /// Largest relative increase of sup error along decreasing eps.
  double worst_monotonicity_violation() const;
};

ConvergenceTable run_convergence_in_eps(const ExperimentConfig& cfg);

struct EnergyAuditResult {
  EnergyLedger local;
  EnergyLedger nonlocal;
  double local_residual_max = 0.0;  // relative to 1 + E(0)
  double nonlocal_residual_max = 0.0;
  double local_growth_max = 0.0;
  double nonlocal_growth_max = 0.0;
};

EnergyAuditResult run_energy_audit(const ExperimentConfig& cfg);

struct EntropyRateAudit {
  std::vector<EntropyReport> series;  // every time step
  /// max_t |centered d(eta)/dt - rate_rhs| / max_t |rate_rhs|
  double rate_identity_residual = 0.0;
  /// max_t of d(eta^M)/dt - rate_bound_rhs - slack * max(1, |rate_bound_rhs|); <= 0 passes
  double bound_violation = 0.0;
  /// max_t of d(eta^M)/dt - rate_bound_rhs without slack
  double raw_bound_excess = 0.0;
  /// min_t of eta^M - (|u^e-u|^2/2 + |v^e-v|^2/2 + surface_gap), i.e. F[u^e-u]
  double min_coercive_margin = 0.0;
};

EntropyRateAudit run_entropy_rate_audit(const ExperimentConfig& cfg);

struct DependenceRow {
  double delta = 0.0;
  double sup_du = 0.0;
  double sup_dv = 0.0;
  std::optional<double> ratio;  // sup_t(|du| + |dv|) / delta, absent for delta = 0
};

struct ContinuousDependenceResult {
  std::vector<DependenceRow> rows;
  double spread = 0.0;  // max ratio / min ratio
};

ContinuousDependenceResult run_continuous_dependence(const ExperimentConfig& cfg);

struct SweepRow {
  double eps = 0.0;
  double value = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<OrderFit> fit;
};

/// ||L_eps[u0] - gamma u0_xx|| over eps_list, u0 from the initial data.
SweepResult run_reg_gap_sweep(const ExperimentConfig& cfg);
/// |surface_gap| with u^eps = u = u0 over eps_list.
SweepResult run_surface_gap_sweep(const ExperimentConfig& cfg);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=" or ">="
  bool passed = false;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<Check> checks;
  nlohmann::json details;

  bool passed() const;
  nlohmann::json summary(const ExperimentConfig& cfg) const;
};

/// Writes one torus-field CSV per snapshot (u and v) plus manifest.json
/// listing times and parameters.
void export_trajectory(const Trajectory& traj, const std::string& dir);

/// Runs cfg.experiment, writes the CSV outputs and summary.json into
/// cfg.output_dir, and returns the checks.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace elasto
