#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ocf/errors.hpp"

namespace ocf {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

inline constexpr double kQuadratureTolerance = 1e-12;

/// Adaptive 21-point Gauss-Kronrod on [a, b]. Throws NumericalError when the
/// estimated error stays above tol * max(1, |value|).
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double tol = kQuadratureTolerance,
                           unsigned max_depth = 30) {
  if (a == b) return {};
  // Subdivision cannot resolve anything on a few-ulp interval; use the
  // midpoint value with the whole contribution as the error.
  if (std::abs(b - a) <= 1e-13 * std::max({1.0, std::abs(a), std::abs(b)})) {
    const double v = f(0.5 * (a + b)) * (b - a);
    return {v, std::abs(v)};
  }
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      f, a, b, max_depth, tol, &error);
  if (!(error <= tol * std::max(1.0, std::abs(value))) && error > 1e-15) {
    throw NumericalError("quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                             "] did not converge",
                         error);
  }
  return {value, error};
}

}  // namespace ocf
