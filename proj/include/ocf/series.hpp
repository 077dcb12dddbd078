#pragma once

// Closed-form remainders of series over odd indices i = J, J+2, J+4, ...
// written through polygamma functions. These are the analytic tails used
// whenever a sum over partial quotients is truncated.

namespace ocf::series {

/// sum_{odd i >= J} [1/(i - c) - 1/(i + c)], requires J - c > 0.
double odd_inverse_difference(long J, double c);

/// sum_{odd i >= J} (i + a)^(-m) for m >= 2, requires J + a > 0.
double odd_inverse_power(long J, double a, int m);

/// sum_{odd i >= J} [(i - c)^(-2) - (i + c)^(-2)], requires J - c > 0.
double odd_inverse_square_difference(long J, double c);

/// Smallest odd integer >= max(1, v).
long odd_ceil(double v);

}  // namespace ocf::series
