#include "elasto/fit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace elasto;
using Pairs = std::vector<std::pair<double, double>>;

TEST(FitOrder, ExactPowerLaw) {
  Pairs p{{0.1, 3e-2}, {0.05, 7.5e-3}, {0.025, 1.875e-3}};
  auto f = fit_order(p);
  EXPECT_NEAR(f.order, 2.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_NEAR(f.prefactor, 3.0, 1e-10);
}

TEST(FitOrder, NoisyData) {
  Pairs p{{0.2, 0.2 * 1.05}, {0.1, 0.1 * 0.97}, {0.05, 0.05 * 1.02}, {0.025, 0.025 * 0.99}};
  auto f = fit_order(p);
  EXPECT_NEAR(f.order, 1.0, 0.05);
  EXPECT_GT(f.r2, 0.99);
  EXPECT_LT(f.r2, 1.0);
}

TEST(FitOrder, Rejects) {
  EXPECT_THROW(fit_order(Pairs{{0.1, 1}, {0.05, 0.5}}), std::invalid_argument);
  try {
    fit_order(Pairs{{0.1, 1}, {0.05, 0.0}, {0.025, 0.1}});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
  EXPECT_THROW(fit_order(Pairs{{-0.1, 1}, {0.05, 0.5}, {0.025, 0.1}}), std::invalid_argument);
}
