#pragma once

#include "elasto/quadrature.hpp"
#include "elasto/torus_field.hpp"

#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace elasto {

/// Requested second moment cannot be carried by a kernel supported in [-1, 1].
class UnachievableMomentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// eps * b >= 1/2: the scaled kernel would wrap around the unit circle.
class SupportTooWideError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Moments of the unit-mass bump psi(s) ~ exp(-1/(1-s^2)) on [-1, 1].
struct BumpMoments {
  double normalization;  // integral of the unnormalized bump
  double second;         // m2(psi)
  double fourth;         // m4(psi)
};

/// Computed once, to 1e-14, by composite Gauss-Legendre.
const BumpMoments& bump_moments();

/// Unit-mass bump psi(s); zero outside (-1, 1).
double bump(double s);

/// Even, nonnegative kernel phi(s) = psi(s/b)/b with unit mass and second
/// moment 2*gamma, where b = sqrt(2 gamma / m2(psi)).
class Mollifier {
 public:
  double gamma() const { return gamma_; }
  double scale_b() const { return b_; }
  double mass() const { return mass_; }
  double second_moment() const { return second_moment_; }
  double fourth_moment() const { return fourth_moment_; }
  double quad_tolerance() const { return tol_; }

  double density(double s) const;
  /// Symmetric composite Gauss-Legendre rule on [-b, b]; weights include phi.
  const QuadratureRule& quad_nodes() const { return weighted_; }

  /// Phi(xi) - 1 with Phi(xi) = int phi(s) cos(2 pi xi s) ds, evaluated as
  /// -2 int phi(s) sin^2(pi xi s) ds to avoid cancellation near xi = 0.
  /// `panels` selects the half-support panel count (0 = certified default).
  double transform_minus_one(double xi, int panels = 0) const;
  double transform(double xi) const { return 1.0 + transform_minus_one(xi); }

  int panels() const { return panels_; }

 private:
  friend Mollifier build_mollifier(double gamma, double quad_tolerance);
  double gamma_ = 0.0, b_ = 0.0, tol_ = 0.0;
  double mass_ = 0.0, second_moment_ = 0.0, fourth_moment_ = 0.0;
  int panels_ = 0;
  QuadratureRule weighted_;
};

/// Throws UnachievableMomentError unless 0 < 2 gamma <= m2(psi).
Mollifier build_mollifier(double gamma, double quad_tolerance = 1e-12);

/// Largest admissible gamma, m2(psi)/2.
double max_admissible_gamma();

/// Fourier symbol of L_eps: m[k] = (Phi(eps k) - 1)/eps^2 for k = 0..n/2.
class NonlocalMultiplier {
 public:
  NonlocalMultiplier(double eps, std::size_t n, std::vector<double> half);

  double eps() const { return eps_; }
  std::size_t size() const { return n_; }
  double operator[](long k) const { return half_[static_cast<std::size_t>(k < 0 ? -k : k)]; }
  std::span<const double> half() const { return half_; }

 private:
  double eps_;
  std::size_t n_;
  std::vector<double> half_;
};

/// Tabulates m[k]. Refines the quadrature until the table changes by less
/// than the mollifier's tolerance. Throws SupportTooWideError if eps*b >= 1/2.
NonlocalMultiplier multiplier_table(const Mollifier& phi, double eps, std::size_t n);

void write_csv(std::ostream& os, const NonlocalMultiplier& m);

/// L_eps[w] by spectral multiplication.
TorusField apply_L(const TorusField& w, const NonlocalMultiplier& mult);

/// Trigonometric interpolant of a sampled field, evaluable off-grid.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const TorusField& w);
  double operator()(double x) const;

 private:
  std::size_t n_;
  std::vector<std::complex<double>> half_;
};

/// Uniform trapezoid nodes on [-b, b] with weights phi(s_i) * ds.
QuadratureRule kernel_trapezoid(const Mollifier& phi, int intervals);

/// L_eps[w] by physical-space convolution: trapezoid over the kernel and
/// band-limited interpolation of w at the shifted points x_j - eps s_i.
TorusField apply_L_direct(const TorusField& w, const Mollifier& phi, double eps, int intervals = 1024);

void require_support_fits(const Mollifier& phi, double eps);

}  // namespace elasto
