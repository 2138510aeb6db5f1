#pragma once

#include <span>
#include <utility>

namespace elasto {

struct OrderFit {
  double order = 0.0;
  double r2 = 0.0;
  double prefactor = 0.0;  // value ~ prefactor * eps^order
};

/// Least-squares slope of log(value) against log(eps). Needs at least three
/// pairs with positive eps and value; throws std::invalid_argument naming the
/// offending row otherwise.
OrderFit fit_order(std::span<const std::pair<double, double>> pairs);

}  // namespace elasto
