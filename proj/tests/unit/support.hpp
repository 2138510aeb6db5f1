#pragma once

#include "elasto/torus_field.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace elasto::testing {

// Sum of sines and cosines with random amplitudes on modes 1..kmax.
inline TorusField random_band_limited(std::size_t n, int kmax, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> a(kmax + 1), b(kmax + 1);
  for (int k = 1; k <= kmax; ++k) {
    a[k] = scale * g(rng) / k;
    b[k] = scale * g(rng) / k;
  }
  return TorusField::sample(n, [&](double x) {
    double s = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      s += a[k] * std::sin(2 * std::numbers::pi * k * x) + b[k] * std::cos(2 * std::numbers::pi * k * x);
    }
    return s;
  });
}

inline TorusField sine(std::size_t n, int k, double amp = 1.0) {
  return TorusField::sample(n, [=](double x) { return amp * std::sin(2 * std::numbers::pi * k * x); });
}

inline TorusField cosine(std::size_t n, int k, double amp = 1.0) {
  return TorusField::sample(n, [=](double x) { return amp * std::cos(2 * std::numbers::pi * k * x); });
}

inline double max_abs_diff(const TorusField& a, const TorusField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace elasto::testing
