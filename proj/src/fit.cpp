#include "elasto/fit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace elasto {

OrderFit fit_order(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("fit_order: need at least 3 pairs");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [eps, value] = pairs[i];
    if (!(eps > 0.0) || !(value > 0.0) || !std::isfinite(value))
      throw std::invalid_argument("fit_order: row " + std::to_string(i) + " (eps = " + std::to_string(eps) +
                                  ", value = " + std::to_string(value) + ") must be positive");
    x.push_back(std::log(eps));
    y.push_back(std::log(value));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_order: eps values must not all coincide");
  OrderFit f;
  f.order = sxy / sxx;
  f.prefactor = std::exp(my - f.order * mx);
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace elasto
