#include "elasto/fit.hpp"
#include "elasto/integrator.hpp"
#include "unit/support.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace elasto;
using elasto::testing::cosine;
using elasto::testing::max_abs_diff;
using elasto::testing::random_band_limited;
using elasto::testing::sine;

namespace {

constexpr double pi = std::numbers::pi;
using cd = std::complex<double>;
using Mat = std::array<double, 4>;

// exp(tM) for a real 2x2 matrix via exp(st) (cosh(qt) I + sinh(qt)/q (M - sI)).
Mat expm(const Mat& m, double t) {
  const double s = 0.5 * (m[0] + m[3]);
  const double det = m[0] * m[3] - m[1] * m[2];
  const cd q = std::sqrt(cd(s * s - det));
  const cd ch = std::cosh(q * t);
  const cd sh = std::abs(q) < 1e-14 ? cd(t) : std::sinh(q * t) / q;
  const double e = std::exp(s * t);
  return {e * (ch + sh * (m[0] - s)).real(), e * (sh * m[1]).real(), e * (sh * m[2]).real(),
          e * (ch + sh * (m[3] - s)).real()};
}

// u = a sin(2 pi x), v = c cos(2 pi x) under W = 0.
struct LinearMode {
  double a0, c0;
  Mat m;
  std::pair<double, double> at(double t) const {
    auto e = expm(m, t);
    return {e[0] * a0 + e[1] * c0, e[2] * a0 + e[3] * c0};
  }
};

double one_step_error(const LinearMode& mode, double dt, const ModelParams& p, const NonlocalMultiplier* mult) {
  const std::size_t n = 32;
  State s(sine(n, 1, mode.a0), cosine(n, 1, mode.c0));
  auto next = step(s, dt, p, zero_potential(), mult);
  auto [a, c] = mode.at(dt);
  return std::max(max_abs_diff(next.u, sine(n, 1, a)), max_abs_diff(next.v, cosine(n, 1, c)));
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < h.size(); ++i) pairs.emplace_back(h[i], err[i]);
  return fit_order(pairs).order;
}

std::vector<double> orders(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<double> out;
  for (std::size_t i = 1; i < h.size(); ++i) out.push_back(std::log(err[i - 1] / err[i]) / std::log(h[i - 1] / h[i]));
  return out;
}

}  // namespace

TEST(LinearBlock, Entries) {
  ModelParams p{};
  auto b = linear_block(16, p, nullptr);
  ASSERT_EQ(b.modes.size(), 9u);
  for (auto z : b.modes[0]) EXPECT_EQ(z, cd(0));
  const double k = 2 * pi;
  EXPECT_NEAR(b.modes[1][1].imag(), k, 1e-14);
  EXPECT_NEAR(b.modes[1][2].imag(), p.gamma * k * k * k, 1e-12);
  EXPECT_NEAR(b.modes[1][3].real(), -p.mu * k * k, 1e-12);
  const auto& nyq = b.modes[8];
  EXPECT_EQ(nyq[1], cd(0));
  EXPECT_EQ(nyq[2], cd(0));
  EXPECT_NEAR(nyq[3].real(), -p.mu * std::pow(2 * pi * 8, 2), 1e-9);
}

// With mu = 0.5 the viscous eigenvalue is about -19, so mu k^2 dt must be
// small before the dt^4 term stops biasing the slope.
TEST(Step, LocalTruncationIsThirdOrder) {
  const double k = 2 * pi;
  for (double mu : {0.1, 0.5}) {
    ModelParams p{mu, 0.005, std::nullopt};
    LinearMode mode{0.2, 0.1, {0, -k, p.gamma * k * k * k, -p.mu * k * k}};
    std::vector<double> h = mu < 0.2 ? std::vector<double>{1e-2, 5e-3, 2.5e-3}
                                     : std::vector<double>{2.5e-3, 1.25e-3, 6.25e-4};
    std::vector<double> err;
    for (double dt : h) err.push_back(one_step_error(mode, dt, p, nullptr));
    EXPECT_GE(fitted_order(h, err), 2.9) << mu;
  }
}

TEST(Step, NonlocalLocalTruncationIsThirdOrder) {
  ModelParams p{0.1, 0.005, 0.1};
  auto m = multiplier_table(build_mollifier(p.gamma), 0.1, 32);
  const double k = 2 * pi;
  LinearMode mode{0.2, 0.1, {0, -k, -m[1] * k, -p.mu * k * k}};
  std::vector<double> h{1e-2, 5e-3, 2.5e-3}, err;
  for (double dt : h) err.push_back(one_step_error(mode, dt, p, &m));
  EXPECT_GE(fitted_order(h, err), 2.9);
}

TEST(Step, LinearGlobalAgainstExponential) {
  ModelParams p{};
  const double k = 2 * pi;
  LinearMode mode{0.2, 0.1, {0, -k, p.gamma * k * k * k, -p.mu * k * k}};
  const std::size_t n = 32;
  State s0(sine(n, 1, 0.2), cosine(n, 1, 0.1));
  auto traj = run(s0, 0.5, 1e-4, 5000, p, zero_potential());
  auto [a, c] = mode.at(0.5);
  EXPECT_LT(max_abs_diff(traj.snapshots.back().u, sine(n, 1, a)), 1e-8);
  EXPECT_LT(max_abs_diff(traj.snapshots.back().v, cosine(n, 1, c)), 1e-8);
}

TEST(Step, RestStateIsFixed) {
  State s(TorusField::zeros(64), TorusField::zeros(64));
  auto next = step(s, 1e-3, ModelParams{}, double_well());
  EXPECT_EQ(linf_norm(next.u), 0.0);
  EXPECT_EQ(linf_norm(next.v), 0.0);
  EXPECT_DOUBLE_EQ(next.time, 1e-3);
}

TEST(Step, PreservesZeroMean) {
  std::mt19937_64 rng(13);
  State s(random_band_limited(64, 20, rng, 0.3), random_band_limited(64, 20, rng, 0.3));
  ModelParams p{};
  for (int i = 0; i < 1000; ++i) s = step(s, 1e-4, p, double_well());
  EXPECT_LT(std::abs(s.u.mean()), 1e-13);
  EXPECT_LT(std::abs(s.v.mean()), 1e-13);
}

TEST(Run, GlobalSecondOrder) {
  const std::size_t n = 128;
  ModelParams p{};
  State s0(sine(n, 1, 0.4) + sine(n, 2, 0.2), sine(n, 1, 0.2));
  const double T = 0.2;
  auto final_state = [&](double dt) { return run(s0, T, dt, 1 << 30, p, double_well()).snapshots.back(); };
  const State ref = final_state(2.5e-4 / 64);
  std::vector<double> h{2e-3, 1e-3, 5e-4, 2.5e-4}, err;
  for (double dt : h) {
    auto s = final_state(dt);
    err.push_back(l2_norm(s.u - ref.u) + l2_norm(s.v - ref.v));
  }
  for (double o : orders(h, err)) EXPECT_GE(o, 1.9);
}

TEST(Run, RecordsAndLandsOnFinalTime) {
  ModelParams p{};
  State s0(sine(64, 1, 0.2), TorusField::zeros(64));
  auto traj = run(s0, 0.0105, 1e-3, 4, p, double_well());
  ASSERT_EQ(traj.snapshots.size(), 4u);
  EXPECT_DOUBLE_EQ(traj.snapshots.front().time, 0.0);
  EXPECT_NEAR(traj.snapshots[1].time, 0.004, 1e-15);
  EXPECT_NEAR(traj.snapshots.back().time, 0.0105, 1e-15);
  EXPECT_EQ(traj.ledger.times.size(), traj.snapshots.size());
}

TEST(Run, EnergyBalanceAndMonotonicity) {
  const std::size_t n = 512;
  ModelParams p{};
  State s0(sine(n, 1, 0.2), TorusField::zeros(n));
  auto phi = build_mollifier(p.gamma);
  auto m = multiplier_table(phi, 0.05, n);
  ModelParams pn{p.mu, p.gamma, 0.05};
  for (const auto& [params, mult] : {std::pair{p, (const NonlocalMultiplier*)nullptr}, std::pair{pn, (const NonlocalMultiplier*)&m}}) {
    auto traj = run(s0, 0.5, 1e-4, 50, params, double_well(), mult);
    const double e0 = traj.ledger.energy.front();
    EXPECT_LE(traj.ledger.max_abs_residual(), 1e-6 * (1 + e0));
    for (std::size_t i = 1; i < traj.ledger.energy.size(); ++i) {
      EXPECT_LE(traj.ledger.energy[i], traj.ledger.energy[i - 1] + 1e-8 * (1 + e0));
    }
  }
}

TEST(Run, LargeAmplitudeIsStable) {
  const std::size_t n = 1024;
  State s0(sine(n, 1, 1.5), sine(n, 2, 0.5));
  auto traj = run(s0, 0.02, 1e-4, 50, ModelParams{}, double_well());
  EXPECT_LT(linf_norm(traj.snapshots.back().u), 3.0);
  EXPECT_LE(traj.ledger.max_abs_residual(), 1e-6 * (1 + traj.ledger.energy.front()));
}

TEST(Run, BlowUpReportsLastGoodState) {
  Potential stiff("stiff", {0, 0, 0, 0, 1e4}, 1.0);
  State s0(sine(64, 1, 1.0), TorusField::zeros(64));
  try {
    run(s0, 10.0, 1e-2, 1, ModelParams{}, stiff);
    FAIL() << "expected blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.last_good().time, e.time());
    EXPECT_TRUE(std::isfinite(linf_norm(e.last_good().u)));
  }
}

TEST(Run, RejectsBadArguments) {
  State s0(sine(16, 1), TorusField::zeros(16));
  EXPECT_THROW(run(s0, 0.0, 1e-3, 1, ModelParams{}, double_well()), std::invalid_argument);
  EXPECT_THROW(run(s0, 1.0, 1e-3, 0, ModelParams{}, double_well()), std::invalid_argument);
  EXPECT_THROW(step(s0, 1e-3, ModelParams{0.5, 0.005, 0.1}, double_well()), std::invalid_argument);
}
