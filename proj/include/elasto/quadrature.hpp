#pragma once

#include <functional>
#include <vector>

namespace elasto {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
QuadratureRule gauss_legendre(int points);

/// Composite Gauss-Legendre on [a, b] with equal panels of `points` nodes each.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int points = 16);

struct AdaptiveResult {
  double value = 0.0;
  int panels = 0;
};

/// Integrates f over [a, b] with composite Gauss-Legendre, starting at
/// `initial_panels` panels and doubling until successive estimates differ
/// by less than tol.
AdaptiveResult integrate_doubling(const std::function<double(double)>& f, double a, double b,
                                  double tol, int initial_panels = 4, int max_panels = 1 << 16);

}  // namespace elasto
