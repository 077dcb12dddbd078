#include "ocf/series.hpp"

#include <cmath>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>

namespace ocf::series {

// With i = J + 2k the odd sums become (1/2^m) sum_k (k + (J + a)/2)^(-m),
// i.e. Hurwitz zeta values, and polygamma(m-1, z) = (-1)^m (m-1)! zeta(m, z).

double odd_inverse_difference(long J, double c) {
  const double j = static_cast<double>(J);
  return 0.5 * (boost::math::digamma((j + c) / 2.0) - boost::math::digamma((j - c) / 2.0));
}

double odd_inverse_power(long J, double a, int m) {
  const double z = (static_cast<double>(J) + a) / 2.0;
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * boost::math::polygamma(m - 1, z) / (std::tgamma(m) * std::ldexp(1.0, m));
}

double odd_inverse_square_difference(long J, double c) {
  const double j = static_cast<double>(J);
  return 0.25 * (boost::math::trigamma((j - c) / 2.0) - boost::math::trigamma((j + c) / 2.0));
}

long odd_ceil(double v) {
  if (!(v > 1.0)) return 1;
  auto i = static_cast<long>(std::ceil(v));
  if (i % 2 == 0) ++i;
  return i;
}

}  // namespace ocf::series
