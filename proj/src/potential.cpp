#include "elasto/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace elasto {

namespace {

std::vector<double> differentiate(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
  return d;
}

std::vector<double> trim(std::vector<double> c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.empty()) c.push_back(0.0);
  return c;
}

}  // namespace

Potential::Potential(std::string name, std::vector<double> coefficients, double wbar)
    : name_(std::move(name)), w_(trim(std::move(coefficients))), wbar_(wbar) {
  for (double c : w_)
    if (!std::isfinite(c)) throw std::invalid_argument("Potential: non-finite coefficient");
  if (!(wbar_ > 0.0)) throw std::invalid_argument("Potential: wbar must be positive");
  dw_ = differentiate(w_);
  d2w_ = differentiate(dw_);
  d3w_ = differentiate(d2w_);
}

double Potential::horner(const std::vector<double>& c, double u) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * u + *it;
  return r;
}

Potential double_well() { return Potential("double_well", {0.25, 0.0, -0.5, 0.0, 0.25}, 1.0); }

Potential quadratic_well() { return Potential("quadratic", {0.0, 0.0, 0.5}, 1.0); }

Potential zero_potential() { return Potential("zero", {0.0}, 1.0); }

ValidationReport validate(const Potential& p, double lo, double hi, int samples) {
  if (!(lo < hi)) throw std::invalid_argument("validate: need lo < hi");
  if (samples < 100) throw std::invalid_argument("validate: need at least 100 samples");

  ValidationReport r;
  r.min_w = std::numeric_limits<double>::infinity();
  r.min_curvature_margin = std::numeric_limits<double>::infinity();
  constexpr double h = 1e-5;
  for (int i = 0; i < samples; ++i) {
    const double u = lo + (hi - lo) * i / (samples - 1);
    r.min_w = std::min(r.min_w, p.eval(u));
    r.min_curvature_margin = std::min(r.min_curvature_margin, p.d2(u) + p.wbar());
    const double fd1 = (p.eval(u + h) - p.eval(u - h)) / (2 * h);
    const double fd2 = (p.d1(u + h) - p.d1(u - h)) / (2 * h);
    const double fd3 = (p.d2(u + h) - p.d2(u - h)) / (2 * h);
    r.max_d1_error = std::max(r.max_d1_error, std::abs(fd1 - p.d1(u)));
    r.max_d2_error = std::max(r.max_d2_error, std::abs(fd2 - p.d2(u)));
    r.max_d3_error = std::max(r.max_d3_error, std::abs(fd3 - p.d3(u)));
  }
  r.passed = r.min_w >= -1e-12 && r.min_curvature_margin >= -1e-12 && r.max_d1_error <= 1e-6 &&
             r.max_d2_error <= 1e-6 && r.max_d3_error <= 1e-6;
  return r;
}

}  // namespace elasto
