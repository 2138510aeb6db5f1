#pragma once

#include <string>
#include <vector>

namespace elasto {

/// Stored-energy density W given as a polynomial sum_i c_i u^i, together
/// with a certified constant wbar such that W''(u) >= -wbar.
///
/// Polynomials keep W smooth by construction; derivatives are exact.
class Potential {
 public:
  Potential(std::string name, std::vector<double> coefficients, double wbar);

  double eval(double u) const { return horner(w_, u); }
  double d1(double u) const { return horner(dw_, u); }
  double d2(double u) const { return horner(d2w_, u); }
  double d3(double u) const { return horner(d3w_, u); }

  double wbar() const { return wbar_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& coefficients() const { return w_; }
  /// Polynomial degree of W' (0 for a constant or vanishing W').
  int stress_degree() const { return static_cast<int>(dw_.size()) - 1; }

 private:
  static double horner(const std::vector<double>& c, double u);

  std::string name_;
  std::vector<double> w_, dw_, d2w_, d3w_;
  double wbar_;
};

/// W(u) = (u^2 - 1)^2 / 4 with wbar = 1.
Potential double_well();
/// W(u) = u^2 / 2.
Potential quadratic_well();
/// W = 0, for linear dynamics.
Potential zero_potential();

struct ValidationReport {
  double min_w = 0.0;
  double min_curvature_margin = 0.0;  // min of W'' + wbar
  double max_d1_error = 0.0;
  double max_d2_error = 0.0;
  double max_d3_error = 0.0;
  bool passed = false;
};

/// Samples [lo, hi] and checks W >= 0, W'' >= -wbar (both to 1e-12) and
/// that d1/d2/d3 agree with centered differences to 1e-6.
ValidationReport validate(const Potential& p, double lo, double hi, int samples);

}  // namespace elasto
