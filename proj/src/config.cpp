#include "elasto/config.hpp"

#include "elasto/mollifier.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace elasto {

using nlohmann::json;

namespace {

const std::pair<Experiment, const char*> kExperimentNames[] = {
    {Experiment::convergence_in_eps, "convergence_in_eps"},
    {Experiment::energy_audit, "energy_audit"},
    {Experiment::entropy_rate_audit, "entropy_rate_audit"},
    {Experiment::continuous_dependence, "continuous_dependence"},
    {Experiment::reg_gap_sweep, "reg_gap_sweep"},
    {Experiment::surface_gap_sweep, "surface_gap_sweep"},
};

Experiment experiment_from_string(const std::string& s) {
  for (const auto& [e, name] : kExperimentNames)
    if (s == name) return e;
  throw ConfigError("unknown experiment '" + s + "'");
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<SineMode> read_modes(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ConfigError(where + " must be an array");
  std::vector<SineMode> modes;
  for (const auto& m : arr) {
    reject_unknown(m, {"k", "amplitude"}, where);
    SineMode s;
    read(m, "k", s.k);
    read(m, "amplitude", s.amplitude);
    modes.push_back(s);
  }
  return modes;
}

json modes_json(const std::vector<SineMode>& modes) {
  json arr = json::array();
  for (const auto& m : modes) arr.push_back({{"k", m.k}, {"amplitude", m.amplitude}});
  return arr;
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [value, name] : kExperimentNames)
    if (value == e) return name;
  return "unknown";
}

State InitialData::build(std::size_t n) const {
  if (family == "zero") return State(TorusField::zeros(n), TorusField::zeros(n));
  auto field = [n](const std::vector<SineMode>& modes) {
    return TorusField::sample(n, [&](double x) {
      double s = 0.0;
      for (const auto& m : modes) s += m.amplitude * std::sin(2.0 * std::numbers::pi * m.k * x);
      return s;
    });
  };
  // Sine modes are mean-zero analytically; the projection removes round-off.
  return State(project_mean_zero(field(u_modes)), project_mean_zero(field(v_modes)));
}

Potential PotentialSpec::build() const {
  if (name == "double_well") return double_well();
  if (name == "quadratic") return quadratic_well();
  if (name == "zero") return zero_potential();
  if (name == "polynomial") return Potential("polynomial", coefficients, wbar);
  throw ConfigError("unknown potential '" + name + "'");
}

long ExperimentConfig::steps() const { return std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-9))); }

int ExperimentConfig::effective_record_every() const {
  if (record_every > 0) return record_every;
  return static_cast<int>(std::max(1L, steps() / 100));
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"experiment", "n", "T", "dt", "mu", "gamma", "eps_list", "eps", "potential", "initial_data",
                  "delta_list", "perturb", "perturbation_mode", "record_every", "dt_control", "export_snapshots", "kernel",
                  "quad_tolerance", "threads", "output_dir"},
                 "config");
  ExperimentConfig cfg;
  if (j.contains("experiment")) {
    if (!j["experiment"].is_string()) throw ConfigError("'experiment' must be a string");
    cfg.experiment = experiment_from_string(j["experiment"].get<std::string>());
  }
  read(j, "n", cfg.n);
  read(j, "T", cfg.T);
  read(j, "dt", cfg.dt);
  read(j, "mu", cfg.mu);
  read(j, "gamma", cfg.gamma);
  read(j, "eps_list", cfg.eps_list);
  read(j, "eps", cfg.eps);
  read(j, "delta_list", cfg.delta_list);
  read(j, "perturb", cfg.perturb);
  read(j, "perturbation_mode", cfg.perturbation_mode);
  read(j, "record_every", cfg.record_every);
  read(j, "dt_control", cfg.dt_control);
  read(j, "export_snapshots", cfg.export_snapshots);
  read(j, "kernel", cfg.kernel);
  read(j, "quad_tolerance", cfg.quad_tolerance);
  read(j, "threads", cfg.threads);
  read(j, "output_dir", cfg.output_dir);
  if (j.contains("potential")) {
    const json& p = j["potential"];
    reject_unknown(p, {"name", "coefficients", "wbar"}, "potential");
    read(p, "name", cfg.potential.name);
    read(p, "coefficients", cfg.potential.coefficients);
    read(p, "wbar", cfg.potential.wbar);
  }
  if (j.contains("initial_data")) {
    const json& d = j["initial_data"];
    reject_unknown(d, {"family", "u_modes", "v_modes"}, "initial_data");
    read(d, "family", cfg.initial_data.family);
    if (d.contains("u_modes")) cfg.initial_data.u_modes = read_modes(d["u_modes"], "initial_data.u_modes");
    if (d.contains("v_modes")) cfg.initial_data.v_modes = read_modes(d["v_modes"], "initial_data.v_modes");
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = to_string(cfg.experiment);
  j["n"] = cfg.n;
  j["T"] = cfg.T;
  j["dt"] = cfg.dt;
  j["mu"] = cfg.mu;
  j["gamma"] = cfg.gamma;
  j["eps_list"] = cfg.eps_list;
  j["eps"] = cfg.eps;
  j["potential"] = {{"name", cfg.potential.name}, {"coefficients", cfg.potential.coefficients},
                    {"wbar", cfg.potential.wbar}};
  j["initial_data"] = {{"family", cfg.initial_data.family},
                       {"u_modes", modes_json(cfg.initial_data.u_modes)},
                       {"v_modes", modes_json(cfg.initial_data.v_modes)}};
  j["delta_list"] = cfg.delta_list;
  j["perturb"] = cfg.perturb;
  j["perturbation_mode"] = cfg.perturbation_mode;
  j["record_every"] = cfg.effective_record_every();
  j["dt_control"] = cfg.dt_control;
  j["export_snapshots"] = cfg.export_snapshots;
  j["kernel"] = cfg.kernel;
  j["quad_tolerance"] = cfg.quad_tolerance;
  j["threads"] = cfg.threads;
  j["output_dir"] = cfg.output_dir;
  return j;
}

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (cfg.n < 8 || !is_power_of_two(cfg.n)) fail("n must be a power of two >= 8");
  if (!(cfg.T > 0.0)) fail("T must be positive");
  if (!(cfg.dt > 0.0) || cfg.dt > cfg.T) fail("dt must be positive and no larger than T");
  if (!(cfg.mu > 0.0)) fail("mu must be positive");
  const double gmax = max_admissible_gamma();
  if (!(cfg.gamma > 0.0) || cfg.gamma > gmax) {
    std::ostringstream msg;
    msg << "gamma = " << cfg.gamma << " outside the admissible interval (0, " << gmax << "]";
    fail(msg.str());
  }
  if (cfg.kernel != "bump") fail("kernel must be \"bump\"");
  if (!(cfg.quad_tolerance > 0.0)) fail("quad_tolerance must be positive");
  if (cfg.threads < 1) fail("threads must be >= 1");
  if (cfg.record_every < 0) fail("record_every must be >= 0");
  if (cfg.eps_list.empty()) fail("eps_list must not be empty");

  const double b = std::sqrt(2.0 * cfg.gamma / bump_moments().second);
  auto check_eps = [&](double e, const std::string& what) {
    std::ostringstream msg;
    if (!(e > 0.0)) msg << what << " = " << e << " must be positive";
    else if (e < 8.0 / static_cast<double>(cfg.n))
      msg << what << " = " << e << " is below the resolution floor 8/n = " << 8.0 / static_cast<double>(cfg.n);
    else if (e * b >= 0.5)
      msg << what << " = " << e << " makes the kernel support eps*b = " << e * b << " reach 1/2";
    if (!msg.str().empty()) fail(msg.str());
  };
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
    check_eps(cfg.eps_list[i], "eps_list[" + std::to_string(i) + "]");
    if (i > 0 && !(cfg.eps_list[i] < cfg.eps_list[i - 1])) fail("eps_list must be strictly decreasing");
  }
  check_eps(cfg.eps, "eps");
  for (double d : cfg.delta_list)
    if (!(d >= 0.0)) fail("delta_list entries must be nonnegative");
  if (cfg.perturb != "u" && cfg.perturb != "v") fail("perturb must be \"u\" or \"v\"");
  const int kmax = static_cast<int>(cfg.n / 2) - 1;
  if (cfg.perturbation_mode < 1 || cfg.perturbation_mode > kmax) fail("perturbation_mode out of range");
  if (cfg.initial_data.family != "sine_modes" && cfg.initial_data.family != "zero")
    fail("initial_data.family must be \"sine_modes\" or \"zero\"");
  for (const auto* modes : {&cfg.initial_data.u_modes, &cfg.initial_data.v_modes})
    for (const auto& m : *modes)
      if (m.k < 1 || m.k > kmax || !std::isfinite(m.amplitude)) fail("initial_data mode out of range");
  try {
    const Potential pot = cfg.potential.build();
    (void)pot;
  } catch (const std::invalid_argument& e) {
    fail(std::string("potential: ") + e.what());
  }
}

}  // namespace elasto
