// elasto-relent: runs the local/non-local elastodynamics experiments.
//
//   elasto-relent run --config <path> [--output-dir <path>] [--threads <n>]
//   elasto-relent validate --config <path>
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 configuration error.

#include "elasto/experiments.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local vs non-local viscosity-capillarity elastodynamics laboratory"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  int threads = 0;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "JSON config")->required();
  run->add_option("--output-dir", output_dir, "Override output_dir from the config");
  run->add_option("--threads", threads, "Worker threads for parameter sweeps")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("--config", config_path, "JSON config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  elasto::ExperimentConfig cfg;
  try {
    cfg = elasto::load_config(config_path);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (threads > 0) cfg.threads = threads;
    elasto::validate(cfg);
  } catch (const elasto::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (*validate) {
    std::cout << "config OK: experiment " << elasto::to_string(cfg.experiment) << '\n';
    return 0;
  }

  try {
    const elasto::ExperimentReport rep = elasto::run_experiment(cfg);
    for (const auto& c : rep.checks)
      std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " = " << std::setprecision(6) << c.value << ' '
                << c.relation << ' ' << c.threshold << '\n';
    std::cout << "summary written to " << cfg.output_dir << "/summary.json\n";
    return rep.passed() ? 0 : kExitFail;
  } catch (const elasto::BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << " (last good snapshot at t = " << e.last_good().time << ")\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
