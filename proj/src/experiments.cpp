#include "elasto/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace elasto {

namespace fs = std::filesystem;
using nlohmann::json;

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

struct LedgerStats {
  double residual = 0.0;  // relative to 1 + E(0)
  double growth = 0.0;
};

LedgerStats ledger_stats(const EnergyLedger& l) {
  LedgerStats s;
  const double scale = 1.0 + std::abs(l.energy.front());
  s.residual = l.max_abs_residual() / scale;
  s.growth = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < l.energy.size(); ++i) s.growth = std::max(s.growth, (l.energy[i] - l.energy[i - 1]) / scale);
  if (l.energy.size() < 2) s.growth = 0.0;
  return s;
}

std::optional<OrderFit> try_fit(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) return std::nullopt;
  for (const auto& [e, v] : pairs)
    if (!(v > 0.0)) return std::nullopt;
  return fit_order(pairs);
}

Trajectory run_model(const ExperimentConfig& cfg, const State& s0, const Potential& pot,
                     const NonlocalMultiplier* mult, double dt) {
  const ModelParams p = mult ? cfg.nonlocal_params(mult->eps()) : cfg.local_params();
  const int every = std::max(1, static_cast<int>(std::lround(cfg.effective_record_every() * cfg.dt / dt)));
  return run(s0, cfg.T, dt, every, p, pot, mult);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  body(out);
}

json fit_json(const std::optional<OrderFit>& f) {
  if (!f) return nullptr;
  return {{"order", f->order}, {"r2", f->r2}, {"prefactor", f->prefactor}};
}

ConvergenceTable convergence_with_dt(const ExperimentConfig& cfg, double dt) {
  const Potential pot = cfg.potential.build();
  const Mollifier phi = build_mollifier(cfg.gamma, cfg.quad_tolerance);
  const State s0 = cfg.initial_data.build(cfg.n);

  // Slot 0 is the local model; slot i + 1 is eps_list[i].
  const std::size_t runs = cfg.eps_list.size() + 1;
  std::vector<std::optional<Trajectory>> trajs(runs);
  parallel_for(runs, cfg.threads, [&](std::size_t i) {
    if (i == 0) {
      trajs[0] = run_model(cfg, s0, pot, nullptr, dt);
    } else {
      const NonlocalMultiplier mult = multiplier_table(phi, cfg.eps_list[i - 1], cfg.n);
      trajs[i] = run_model(cfg, s0, pot, &mult, dt);
    }
  });

  ConvergenceTable table;
  const Trajectory& local = *trajs[0];
  const LedgerStats ls = ledger_stats(local.ledger);
  table.local_energy_residual_max = ls.residual;
  table.local_energy_growth_max = ls.growth;
  table.local_max_h1 = h1_apriori_check(local.snapshots).max_h1;
  table.local_ledger = local.ledger;

  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
    const Trajectory& nl = *trajs[i + 1];
    ConvergenceRow row;
    row.eps = cfg.eps_list[i];
    for (std::size_t s = 0; s < nl.snapshots.size(); ++s) {
      const double du = l2_norm(nl.snapshots[s].u - local.snapshots[s].u);
      const double dv = l2_norm(nl.snapshots[s].v - local.snapshots[s].v);
      row.sup_t_sq_err_u = std::max(row.sup_t_sq_err_u, du * du);
      row.sup_t_sq_err_v = std::max(row.sup_t_sq_err_v, dv * dv);
      row.sup_t_sq_err_total = std::max(row.sup_t_sq_err_total, du * du + dv * dv);
    }
    const LedgerStats st = ledger_stats(nl.ledger);
    row.energy_residual_max = st.residual;
    row.energy_growth_max = st.growth;
    row.max_h1 = h1_apriori_check(nl.snapshots).max_h1;
    table.rows.push_back(row);
    table.nonlocal_ledgers.push_back(nl.ledger);
    pairs.emplace_back(row.eps, row.sup_t_sq_err_total);
  }
  table.fit = try_fit(pairs);
  return table;
}

}  // namespace

double ConvergenceTable::h1_spread() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.max_h1);
    hi = std::max(hi, r.max_h1);
  }
  if (rows.empty() || hi == 0.0) return 1.0;
  return hi / lo;
}

double ConvergenceTable::worst_monotonicity_violation() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double prev = rows[i - 1].sup_t_sq_err_total;
    const double cur = rows[i].sup_t_sq_err_total;
    if (cur > prev) worst = std::max(worst, prev > 0.0 ? (cur - prev) / prev : std::numeric_limits<double>::infinity());
  }
  return worst;
}

ConvergenceTable run_convergence_in_eps(const ExperimentConfig& cfg) {
  validate(cfg);
  return convergence_with_dt(cfg, cfg.dt);
}

EnergyAuditResult run_energy_audit(const ExperimentConfig& cfg) {
  validate(cfg);
  const Potential pot = cfg.potential.build();
  const Mollifier phi = build_mollifier(cfg.gamma, cfg.quad_tolerance);
  const NonlocalMultiplier mult = multiplier_table(phi, cfg.eps, cfg.n);
  const State s0 = cfg.initial_data.build(cfg.n);

  std::optional<Trajectory> local, nonlocal;
  parallel_for(2, cfg.threads, [&](std::size_t i) {
    if (i == 0) local = run_model(cfg, s0, pot, nullptr, cfg.dt);
    else nonlocal = run_model(cfg, s0, pot, &mult, cfg.dt);
  });

  EnergyAuditResult r;
  r.local = local->ledger;
  r.nonlocal = nonlocal->ledger;
  const LedgerStats a = ledger_stats(r.local), b = ledger_stats(r.nonlocal);
  r.local_residual_max = a.residual;
  r.local_growth_max = a.growth;
  r.nonlocal_residual_max = b.residual;
  r.nonlocal_growth_max = b.growth;

  if (cfg.export_snapshots) {
    export_trajectory(*local, (fs::path(cfg.output_dir) / "snapshots_local").string());
    export_trajectory(*nonlocal, (fs::path(cfg.output_dir) / "snapshots_nonlocal").string());
  }
  return r;
}

EntropyRateAudit run_entropy_rate_audit(const ExperimentConfig& cfg) {
  validate(cfg);
  const Potential pot = cfg.potential.build();
  const Mollifier phi = build_mollifier(cfg.gamma, cfg.quad_tolerance);
  const NonlocalMultiplier mult = multiplier_table(phi, cfg.eps, cfg.n);
  const ModelParams lp = cfg.local_params();
  const ModelParams np = cfg.nonlocal_params(cfg.eps);
  const std::size_t n = cfg.n;

  const State s0 = cfg.initial_data.build(n);
  auto half = [](const TorusField& w) {
    const Spectrum s = to_spectrum(w);
    return std::vector<std::complex<double>>(s.half().begin(), s.half().end());
  };
  auto ul = half(s0.u), vl = half(s0.v), un = ul, vn = vl;

  const long steps = cfg.steps();
  const double last_dt = cfg.T - static_cast<double>(steps - 1) * cfg.dt;
  const Stepper local_full(n, cfg.dt, lp, pot, nullptr), local_last(n, last_dt, lp, pot, nullptr);
  const Stepper nl_full(n, cfg.dt, np, pot, &mult), nl_last(n, last_dt, np, pot, &mult);

  EntropyRateAudit audit;
  audit.series.push_back(entropy_report(s0, s0, np, pot, mult));
  std::vector<double> eta_m_series{audit.series.back().eta_m};
  double margin = std::numeric_limits<double>::infinity();
  auto track_margin = [&](const State& a, const State& b) {
    const double du = l2_norm(a.u - b.u), dv = l2_norm(a.v - b.v);
    const EntropyReport& r = audit.series.back();
    margin = std::min(margin, r.eta_m - (0.5 * du * du + 0.5 * dv * dv + r.surface_gap));
  };
  track_margin(s0, s0);

  for (long i = 1; i <= steps; ++i) {
    const bool last = i == steps;
    (last ? local_last : local_full).advance(ul, vl);
    (last ? nl_last : nl_full).advance(un, vn);
    const double t = last ? cfg.T : static_cast<double>(i) * cfg.dt;
    const State loc(from_spectrum(Spectrum(n, ul)), from_spectrum(Spectrum(n, vl)), t);
    const State nl(from_spectrum(Spectrum(n, un)), from_spectrum(Spectrum(n, vn)), t);
    audit.series.push_back(entropy_report(nl, loc, np, pot, mult));
    track_margin(nl, loc);
  }
  audit.min_coercive_margin = margin;

  double max_rate = 0.0, max_residual = 0.0;
  audit.bound_violation = -std::numeric_limits<double>::infinity();
  audit.raw_bound_excess = -std::numeric_limits<double>::infinity();
  const auto& s = audit.series;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double h = s[i + 1].time - s[i - 1].time;
    const double d_eta = (s[i + 1].eta - s[i - 1].eta) / h;
    const double d_eta_m = (s[i + 1].eta_m - s[i - 1].eta_m) / h;
    max_rate = std::max(max_rate, std::abs(s[i].rate_rhs));
    max_residual = std::max(max_residual, std::abs(d_eta - s[i].rate_rhs));
    audit.raw_bound_excess = std::max(audit.raw_bound_excess, d_eta_m - s[i].rate_bound_rhs);
    audit.bound_violation =
        std::max(audit.bound_violation, d_eta_m - s[i].rate_bound_rhs -
                                            tol::rate_bound_slack * std::max(1.0, std::abs(s[i].rate_bound_rhs)));
  }
  audit.rate_identity_residual = max_rate > 0.0 ? max_residual / max_rate : max_residual;
  if (s.size() < 3) audit.bound_violation = audit.raw_bound_excess = 0.0;
  return audit;
}

ContinuousDependenceResult run_continuous_dependence(const ExperimentConfig& cfg) {
  validate(cfg);
  const Potential pot = cfg.potential.build();
  const Mollifier phi = build_mollifier(cfg.gamma, cfg.quad_tolerance);
  const NonlocalMultiplier mult = multiplier_table(phi, cfg.eps, cfg.n);
  const State s0 = cfg.initial_data.build(cfg.n);
  const TorusField bump_mode = TorusField::sample(
      cfg.n, [&](double x) { return std::sin(2.0 * std::numbers::pi * cfg.perturbation_mode * x); });

  // Slot 0 is the unperturbed run.
  const std::size_t runs = cfg.delta_list.size() + 1;
  std::vector<std::optional<Trajectory>> trajs(runs);
  parallel_for(runs, cfg.threads, [&](std::size_t i) {
    if (i == 0) {
      trajs[0] = run_model(cfg, s0, pot, &mult, cfg.dt);
      return;
    }
    const double delta = cfg.delta_list[i - 1];
    const State perturbed = cfg.perturb == "u" ? State(s0.u + delta * bump_mode, s0.v)
                                               : State(s0.u, s0.v + delta * bump_mode);
    trajs[i] = run_model(cfg, perturbed, pot, &mult, cfg.dt);
  });

  ContinuousDependenceResult result;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < cfg.delta_list.size(); ++i) {
    DependenceRow row;
    row.delta = cfg.delta_list[i];
    double sup_sum = 0.0;
    const auto& base = trajs[0]->snapshots;
    const auto& pert = trajs[i + 1]->snapshots;
    for (std::size_t s = 0; s < base.size(); ++s) {
      const double du = l2_norm(pert[s].u - base[s].u), dv = l2_norm(pert[s].v - base[s].v);
      row.sup_du = std::max(row.sup_du, du);
      row.sup_dv = std::max(row.sup_dv, dv);
      sup_sum = std::max(sup_sum, du + dv);
    }
    if (row.delta > 0.0) {
      row.ratio = sup_sum / row.delta;
      lo = std::min(lo, *row.ratio);
      hi = std::max(hi, *row.ratio);
    }
    result.rows.push_back(row);
  }
  result.spread = hi > 0.0 ? hi / lo : 1.0;
  return result;
}

namespace {

SweepResult sweep(const ExperimentConfig& cfg, const std::function<double(const NonlocalMultiplier&)>& value) {
  validate(cfg);
  const Mollifier phi = build_mollifier(cfg.gamma, cfg.quad_tolerance);
  SweepResult r;
  r.rows.resize(cfg.eps_list.size());
  parallel_for(cfg.eps_list.size(), cfg.threads, [&](std::size_t i) {
    const NonlocalMultiplier mult = multiplier_table(phi, cfg.eps_list[i], cfg.n);
    r.rows[i] = {cfg.eps_list[i], value(mult)};
  });
  std::vector<std::pair<double, double>> pairs;
  for (const auto& row : r.rows) pairs.emplace_back(row.eps, row.value);
  r.fit = try_fit(pairs);
  return r;
}

}  // namespace

SweepResult run_reg_gap_sweep(const ExperimentConfig& cfg) {
  const State s0 = cfg.initial_data.build(cfg.n);
  return sweep(cfg, [&](const NonlocalMultiplier& m) { return reg_gap(s0.u, cfg.nonlocal_params(m.eps()), m); });
}

SweepResult run_surface_gap_sweep(const ExperimentConfig& cfg) {
  const State s0 = cfg.initial_data.build(cfg.n);
  return sweep(cfg, [&](const NonlocalMultiplier& m) {
    return std::abs(surface_gap(s0, s0, cfg.nonlocal_params(m.eps()), m));
  });
}

void export_trajectory(const Trajectory& traj, const std::string& dir) {
  fs::create_directories(dir);
  json manifest;
  manifest["params"] = {{"mu", traj.params.mu}, {"gamma", traj.params.gamma},
                        {"eps", traj.params.eps ? json(*traj.params.eps) : json(nullptr)}};
  manifest["snapshots"] = json::array();
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    std::ostringstream stem;
    stem << "snapshot_" << std::setw(5) << std::setfill('0') << i;
    const State& s = traj.snapshots[i];
    write_file(fs::path(dir) / (stem.str() + "_u.csv"), [&](std::ostream& os) { write_csv(os, s.u); });
    write_file(fs::path(dir) / (stem.str() + "_v.csv"), [&](std::ostream& os) { write_csv(os, s.v); });
    manifest["snapshots"].push_back({{"time", s.time}, {"u", stem.str() + "_u.csv"}, {"v", stem.str() + "_v.csv"}});
  }
  write_file(fs::path(dir) / "manifest.json", [&](std::ostream& os) { os << manifest.dump(2) << '\n'; });
}

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

json ExperimentReport::summary(const ExperimentConfig& cfg) const {
  json j;
  j["experiment"] = experiment;
  j["passed"] = passed();
  j["checks"] = json::array();
  for (const auto& c : checks)
    j["checks"].push_back(
        {{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"relation", c.relation}, {"passed", c.passed}});
  j["details"] = details;
  j["config"] = to_json(cfg);
  return j;
}

namespace {

Check at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, "<=", value <= threshold};
}

Check at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, ">=", value >= threshold};
}

void write_sweep(const fs::path& path, const SweepResult& r, const char* column) {
  write_file(path, [&](std::ostream& os) {
    os << "eps," << column << '\n';
    for (const auto& row : r.rows) os << fmt(row.eps) << ',' << fmt(row.value) << '\n';
  });
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const fs::path out(cfg.output_dir);
  fs::create_directories(out);
  ExperimentReport rep;
  rep.experiment = to_string(cfg.experiment);

  switch (cfg.experiment) {
    case Experiment::convergence_in_eps: {
      const ConvergenceTable t = run_convergence_in_eps(cfg);
      write_file(out / "convergence.csv", [&](std::ostream& os) {
        os << "eps,sup_t_sq_err_u,sup_t_sq_err_v,sup_t_sq_err_total,energy_residual_max,max_h1\n";
        for (const auto& r : t.rows)
          os << fmt(r.eps) << ',' << fmt(r.sup_t_sq_err_u) << ',' << fmt(r.sup_t_sq_err_v) << ','
             << fmt(r.sup_t_sq_err_total) << ',' << fmt(r.energy_residual_max) << ',' << fmt(r.max_h1) << '\n';
      });
      write_file(out / "ledger_local.csv", [&](std::ostream& os) { write_csv(os, t.local_ledger); });
      for (std::size_t i = 0; i < t.nonlocal_ledgers.size(); ++i)
        write_file(out / ("ledger_eps_" + std::to_string(i) + ".csv"),
                   [&](std::ostream& os) { write_csv(os, t.nonlocal_ledgers[i]); });

      double residual = t.local_energy_residual_max, growth = t.local_energy_growth_max;
      for (const auto& r : t.rows) {
        residual = std::max(residual, r.energy_residual_max);
        growth = std::max(growth, r.energy_growth_max);
      }
      if (t.fit) {
        rep.checks.push_back(at_least("fitted_order", t.fit->order, tol::convergence_order));
        rep.checks.push_back(at_least("fit_r2", t.fit->r2, tol::convergence_r2));
        rep.checks.push_back(at_least("proven_order_floor", t.fit->order, tol::proven_order_floor));
      }
      rep.checks.push_back(at_most("energy_residual_max", residual, tol::energy_residual));
      rep.checks.push_back(at_most("energy_growth_max", growth, tol::energy_growth));
      rep.checks.push_back(at_most("monotonicity_violation", t.worst_monotonicity_violation(), tol::monotonicity_slack));
      rep.checks.push_back(at_most("h1_spread", t.h1_spread(), tol::h1_spread));
      rep.details["fit"] = fit_json(t.fit);
      rep.details["local_max_h1"] = t.local_max_h1;

      if (cfg.dt_control) {
        const ConvergenceTable half = convergence_with_dt(cfg, 0.5 * cfg.dt);
        double worst = 0.0;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
          const double a = t.rows[i].sup_t_sq_err_total, b = half.rows[i].sup_t_sq_err_total;
          if (a > 0.0) worst = std::max(worst, std::abs(b - a) / a);
        }
        rep.checks.push_back(at_most("dt_control_max_rel_change", worst, tol::dt_control));
      }
      break;
    }
    case Experiment::energy_audit: {
      const EnergyAuditResult r = run_energy_audit(cfg);
      write_file(out / "energy_local.csv", [&](std::ostream& os) { write_csv(os, r.local); });
      write_file(out / "energy_nonlocal.csv", [&](std::ostream& os) { write_csv(os, r.nonlocal); });
      rep.checks.push_back(at_most("local_energy_residual", r.local_residual_max, tol::energy_residual));
      rep.checks.push_back(at_most("nonlocal_energy_residual", r.nonlocal_residual_max, tol::energy_residual));
      rep.checks.push_back(at_most("local_energy_growth", r.local_growth_max, tol::energy_growth));
      rep.checks.push_back(at_most("nonlocal_energy_growth", r.nonlocal_growth_max, tol::energy_growth));
      break;
    }
    case Experiment::entropy_rate_audit: {
      const EntropyRateAudit a = run_entropy_rate_audit(cfg);
      const int every = cfg.effective_record_every();
      std::vector<EntropyReport> recorded;
      for (std::size_t i = 0; i < a.series.size(); ++i)
        if (i % static_cast<std::size_t>(every) == 0 || i + 1 == a.series.size()) recorded.push_back(a.series[i]);
      write_file(out / "entropy.csv", [&](std::ostream& os) { write_csv(os, recorded); });
      rep.checks.push_back(at_most("rate_identity_residual", a.rate_identity_residual, tol::rate_identity));
      rep.checks.push_back(at_most("rate_bound_violation", a.bound_violation, 0.0));
      rep.checks.push_back(at_least("coercive_margin", a.min_coercive_margin, -1e-10));
      rep.details["raw_bound_excess"] = a.raw_bound_excess;
      break;
    }
    case Experiment::continuous_dependence: {
      const ContinuousDependenceResult r = run_continuous_dependence(cfg);
      write_file(out / "continuous_dependence.csv", [&](std::ostream& os) {
        os << "delta,sup_du,sup_dv,ratio\n";
        for (const auto& row : r.rows)
          os << fmt(row.delta) << ',' << fmt(row.sup_du) << ',' << fmt(row.sup_dv) << ','
             << (row.ratio ? fmt(*row.ratio) : std::string("nan")) << '\n';
      });
      rep.checks.push_back(at_most("ratio_spread", r.spread, tol::dependence_spread));
      break;
    }
    case Experiment::reg_gap_sweep: {
      const SweepResult r = run_reg_gap_sweep(cfg);
      write_sweep(out / "reg_gap.csv", r, "reg_gap");
      if (r.fit) {
        rep.checks.push_back(at_least("reg_gap_order_floor", r.fit->order, tol::reg_gap_floor));
        rep.details["expected_order"] = tol::reg_gap_expected;
        rep.details["expected_order_met"] = r.fit->order >= tol::reg_gap_expected;
      }
      rep.details["fit"] = fit_json(r.fit);
      break;
    }
    case Experiment::surface_gap_sweep: {
      const SweepResult r = run_surface_gap_sweep(cfg);
      write_sweep(out / "surface_gap.csv", r, "abs_surface_gap");
      if (r.fit) rep.checks.push_back(at_least("surface_gap_order", r.fit->order, tol::surface_gap_floor));
      rep.details["fit"] = fit_json(r.fit);
      break;
    }
  }

  write_file(out / "summary.json", [&](std::ostream& os) { os << rep.summary(cfg).dump(2) << '\n'; });
  return rep;
}

}  // namespace elasto
