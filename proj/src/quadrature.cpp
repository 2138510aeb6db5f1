#include "elasto/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace elasto {

QuadratureRule gauss_legendre(int points) {
  if (points < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  QuadratureRule r;
  r.nodes.resize(points);
  r.weights.resize(points);
  const int m = (points + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_points(x) and its derivative.
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= points; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = points * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[points - 1 - i] = x;
    r.weights[i] = r.weights[points - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int points) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: need at least one panel");
  const QuadratureRule base = gauss_legendre(points);
  QuadratureRule r;
  r.nodes.reserve(static_cast<std::size_t>(panels) * points);
  r.weights.reserve(r.nodes.capacity());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < points; ++i) {
      r.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
      r.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return r;
}

AdaptiveResult integrate_doubling(const std::function<double(double)>& f, double a, double b,
                                  double tol, int initial_panels, int max_panels) {
  auto apply = [&](int panels) {
    const QuadratureRule r = composite_gauss_legendre(a, b, panels);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
    return s;
  };
  int panels = initial_panels;
  double prev = apply(panels);
  while (panels < max_panels) {
    panels *= 2;
    const double next = apply(panels);
    if (std::abs(next - prev) < tol) return {next, panels};
    prev = next;
  }
  throw std::runtime_error("integrate_doubling: no convergence within panel limit");
}

}  // namespace elasto
