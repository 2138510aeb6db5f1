#include "elasto/mollifier.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace elasto;

namespace {

constexpr double pi = std::numbers::pi;

double raw_bump(double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

// Independent oracle: adaptive Gauss-Kronrod on the unnormalized bump.
double oracle_moment(int power) {
  auto f = [power](double s) { return std::pow(s, power) * raw_bump(s); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -1.0, 1.0, 20, 1e-15);
}

double oracle_transform(const Mollifier& phi, double xi) {
  auto f = [&](double s) { return phi.density(s) * std::cos(2 * pi * xi * s); };
  const double b = phi.scale_b();
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -b, b, 20, 1e-15);
}

}  // namespace

TEST(Bump, NormalizationAndMoments) {
  const auto& m = bump_moments();
  const double z = oracle_moment(0);
  EXPECT_NEAR(m.normalization, 0.4439938161680794, 1e-13);
  EXPECT_NEAR(m.normalization, z, 1e-13);
  EXPECT_NEAR(m.second, oracle_moment(2) / z, 1e-13);
  EXPECT_NEAR(m.fourth, oracle_moment(4) / z, 1e-13);
  EXPECT_NEAR(m.second, 0.15811363626, 1e-10);
}

TEST(Bump, TanhSinhAgrees) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double z = ts.integrate(raw_bump, -1.0, 1.0);
  EXPECT_NEAR(bump_moments().normalization, z, 1e-12);
}

TEST(Bump, Shape) {
  EXPECT_EQ(bump(1.0), 0.0);
  EXPECT_EQ(bump(-1.5), 0.0);
  EXPECT_NEAR(bump(0.0), std::exp(-1.0) / bump_moments().normalization, 1e-15);
  EXPECT_DOUBLE_EQ(bump(0.3), bump(-0.3));
}

TEST(Mollifier, ScaleAtLargestGamma) {
  const double g = bump_moments().second / 2;
  EXPECT_DOUBLE_EQ(max_admissible_gamma(), g);
  auto phi = build_mollifier(g);
  EXPECT_NEAR(phi.scale_b(), 1.0, 1e-14);
}

TEST(Mollifier, ScaleAtEighthOfMoment) {
  auto phi = build_mollifier(bump_moments().second / 8);
  EXPECT_NEAR(phi.scale_b(), 0.5, 1e-14);
}

TEST(Mollifier, DefaultGammaScale) {
  auto phi = build_mollifier(0.005);
  EXPECT_NEAR(phi.scale_b(), std::sqrt(0.01 / bump_moments().second), 1e-14);
  EXPECT_NEAR(phi.scale_b(), 0.251487, 1e-6);
}

TEST(Mollifier, MomentsAreCertified) {
  for (double g : {1e-4, 0.005, 0.03, max_admissible_gamma()}) {
    auto phi = build_mollifier(g);
    EXPECT_NEAR(phi.mass(), 1.0, 1e-10) << g;
    EXPECT_NEAR(phi.second_moment(), 2 * g, 1e-10) << g;
    const double b = phi.scale_b();
    EXPECT_NEAR(phi.fourth_moment(), bump_moments().fourth * b * b * b * b, 1e-12) << g;
  }
}

TEST(Mollifier, DensityAgainstOracle) {
  auto phi = build_mollifier(0.005);
  const double b = phi.scale_b();
  auto mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double s) { return phi.density(s); }, -b, b, 20, 1e-15);
  EXPECT_NEAR(mass, 1.0, 1e-12);
  for (double s : {0.0, 0.1, -0.2, 0.25}) EXPECT_GE(phi.density(s), 0.0);
  EXPECT_EQ(phi.density(b), 0.0);
  EXPECT_EQ(phi.density(-1.01 * b), 0.0);
}

TEST(Mollifier, QuadNodesIncludeDensity) {
  auto phi = build_mollifier(0.01);
  double mass = 0.0, m2 = 0.0;
  const auto& q = phi.quad_nodes();
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    mass += q.weights[i];
    m2 += q.weights[i] * q.nodes[i] * q.nodes[i];
  }
  EXPECT_NEAR(mass, 1.0, 1e-12);
  EXPECT_NEAR(m2, 0.02, 1e-12);
}

TEST(Mollifier, TransformAgainstOracle) {
  auto phi = build_mollifier(0.005);
  for (double xi : {0.01, 0.3, 1.0, 4.0, 12.5}) {
    EXPECT_NEAR(phi.transform(xi), oracle_transform(phi, xi), 1e-12) << xi;
  }
  EXPECT_DOUBLE_EQ(phi.transform_minus_one(0.0), 0.0);
}

TEST(Mollifier, TransformSmallArgumentHasNoCancellation) {
  auto phi = build_mollifier(0.005);
  const double xi = 1e-6;
  const double expected = -0.5 * std::pow(2 * pi * xi, 2) * 0.01;
  EXPECT_NEAR(phi.transform_minus_one(xi) / expected, 1.0, 1e-6);
}

TEST(Mollifier, RejectsUnachievableMoment) {
  EXPECT_THROW(build_mollifier(0.0), UnachievableMomentError);
  EXPECT_THROW(build_mollifier(-0.01), UnachievableMomentError);
  try {
    build_mollifier(0.1);
    FAIL();
  } catch (const UnachievableMomentError& e) {
    EXPECT_NE(std::string(e.what()).find("0.079"), std::string::npos) << e.what();
  }
}

TEST(Multiplier, BasicProperties) {
  auto phi = build_mollifier(0.005);
  auto m = multiplier_table(phi, 0.05, 256);
  EXPECT_EQ(m[0], 0.0);
  EXPECT_EQ(m.half().size(), 129u);
  for (long k = 1; k <= 128; ++k) {
    EXPECT_LT(m[k], 0.0) << k;
    EXPECT_EQ(m[k], m[-k]);
  }
}

// For an even unit-mass kernel, 1 - x^2/2 <= cos x <= 1 - x^2/2 + x^4/24
// brackets the symbol between the local one and a fourth-moment correction.
TEST(Multiplier, BracketedByMomentExpansion) {
  const double g = 0.005;
  auto phi = build_mollifier(g);
  const double m4 = phi.fourth_moment();
  for (double eps : {0.2, 0.05, 0.0125}) {
    auto m = multiplier_table(phi, eps, 512);
    for (long k = 1; k <= 256; ++k) {
      const double kk = 2 * pi * k;
      const double gap = m[k] + g * kk * kk;
      EXPECT_GE(gap, -1e-10 * (1 + g * kk * kk)) << eps << " " << k;
      EXPECT_LE(gap, eps * eps * std::pow(kk, 4) * m4 / 24 * (1 + 1e-9) + 1e-10) << eps << " " << k;
    }
  }
}

TEST(Multiplier, ConvergesToLocalSymbolAtSecondOrder) {
  const double g = 0.005;
  auto phi = build_mollifier(g);
  std::vector<double> errs;
  const std::vector<double> epss{0.1, 0.05, 0.025};
  for (double eps : epss) {
    auto m = multiplier_table(phi, eps, 64);
    double e = 0.0;
    for (long k = 1; k <= 4; ++k) e = std::max(e, std::abs(m[k] + g * std::pow(2 * pi * k, 2)));
    errs.push_back(e);
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    EXPECT_GE(std::log(errs[i - 1] / errs[i]) / std::log(epss[i - 1] / epss[i]), 1.9);
  }
}

TEST(Multiplier, SupportTooWide) {
  auto phi = build_mollifier(max_admissible_gamma());
  EXPECT_THROW(multiplier_table(phi, 0.5, 64), SupportTooWideError);
  EXPECT_THROW(require_support_fits(phi, 0.6), SupportTooWideError);
  EXPECT_NO_THROW(require_support_fits(phi, 0.49));
}

TEST(Multiplier, Csv) {
  auto m = multiplier_table(build_mollifier(0.005), 0.1, 16);
  std::stringstream ss;
  write_csv(ss, m);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "k,m");
  int rows = 0;
  for (std::string line; std::getline(ss, line);) ++rows;
  EXPECT_EQ(rows, 9);
}
