#include "elasto/config.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace elasto;
using nlohmann::json;

namespace {

std::string error_of(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, Defaults) {
  auto cfg = config_from_json(json::object());
  EXPECT_EQ(cfg.experiment, Experiment::convergence_in_eps);
  EXPECT_EQ(cfg.n, 1024u);
  EXPECT_DOUBLE_EQ(cfg.T, 0.5);
  EXPECT_DOUBLE_EQ(cfg.dt, 1e-4);
  EXPECT_EQ(cfg.eps_list.size(), 5u);
  EXPECT_EQ(cfg.steps(), 5000);
  EXPECT_EQ(cfg.effective_record_every(), 50);
}

TEST(Config, RoundTrip) {
  json j = {{"experiment", "entropy_rate_audit"},
            {"n", 256},
            {"dt", 5e-4},
            {"eps", 0.1},
            {"eps_list", {0.2, 0.1, 0.05}},
            {"potential", {{"name", "polynomial"}, {"coefficients", {0, 0, 0.5}}, {"wbar", 1}}},
            {"initial_data", {{"u_modes", {{{"k", 3}, {"amplitude", 0.1}}}}}}};
  auto cfg = config_from_json(j);
  EXPECT_EQ(cfg.experiment, Experiment::entropy_rate_audit);
  EXPECT_EQ(cfg.initial_data.u_modes.at(0).k, 3);
  auto again = config_from_json(to_json(cfg));
  EXPECT_EQ(to_json(again), to_json(cfg));
  EXPECT_DOUBLE_EQ(again.potential.build().eval(2.0), 2.0);
}

TEST(Config, InitialDataIsMeanZero) {
  InitialData d;
  auto s = d.build(64);
  EXPECT_LT(std::abs(s.u.mean()), 1e-16);
  EXPECT_NEAR(s.u[16], 0.2, 1e-15);
  d.family = "zero";
  EXPECT_EQ(linf_norm(d.build(64).v), 0.0);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_NE(error_of({{"time_step", 1}}).find("time_step"), std::string::npos);
  EXPECT_NE(error_of({{"potential", {{"nme", "zero"}}}}).find("nme"), std::string::npos);
  EXPECT_NE(error_of({{"initial_data", {{"u_modes", {{{"k", 1}, {"amp", 1}}}}}}}).find("amp"), std::string::npos);
}

TEST(Config, RejectsWrongTypes) {
  EXPECT_FALSE(error_of({{"n", "big"}}).empty());
  EXPECT_FALSE(error_of({{"experiment", 3}}).empty());
  EXPECT_FALSE(error_of({{"experiment", "warp_drive"}}).empty());
}

TEST(Config, RejectsInvalidValues) {
  EXPECT_FALSE(error_of({{"n", 1000}}).empty());
  EXPECT_FALSE(error_of({{"n", 4}}).empty());
  EXPECT_FALSE(error_of({{"T", 0}}).empty());
  EXPECT_FALSE(error_of({{"dt", 1.0}}).empty());
  EXPECT_FALSE(error_of({{"mu", -1}}).empty());
  EXPECT_FALSE(error_of({{"eps_list", {0.1, 0.2, 0.05}}}).empty());
  EXPECT_FALSE(error_of({{"eps_list", {0.1, 0.1}}}).empty());
  EXPECT_FALSE(error_of({{"delta_list", {-1e-3}}}).empty());
  EXPECT_FALSE(error_of({{"perturb", "w"}}).empty());
  EXPECT_FALSE(error_of({{"perturbation_mode", 0}}).empty());
  EXPECT_FALSE(error_of({{"kernel", "gauss"}}).empty());
  EXPECT_FALSE(error_of({{"threads", 0}}).empty());
  EXPECT_FALSE(error_of({{"potential", {{"name", "quartic"}}}}).empty());
}

TEST(Config, GammaMessageNamesInterval) {
  auto msg = error_of({{"gamma", 0.5}});
  EXPECT_NE(msg.find("admissible interval"), std::string::npos) << msg;
  EXPECT_NE(msg.find("0.079"), std::string::npos) << msg;
}

TEST(Config, EpsResolutionAndSupport) {
  EXPECT_NE(error_of({{"n", 64}, {"eps_list", {0.2, 0.1}}}).find("resolution"), std::string::npos);
  EXPECT_NE(error_of({{"gamma", 0.07}, {"eps_list", {0.6, 0.1}}}).find("1/2"), std::string::npos);
}

TEST(Config, LoadErrors) {
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}
