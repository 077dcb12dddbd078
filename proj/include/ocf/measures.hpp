#pragma once

// Closed-form invariant and limiting laws of the odd continued fraction.
//
//   rho     T-invariant probability on [0, 1], density
//           (1/(3 log G)) (1/(x + G - 1) - 1/(x - G - 1))
//   xi      stationary law of the chain s_n on [0, G], split at g^2
//   H       Gauss-Kuzmin limit distribution function (equal to rho's CDF)
//   F(x,e)  limit of F_n(x, e) = P(r_{n+k+1} > 1/x, e_{n+k} = e | ...)

#include <vector>

#include "ocf/grid_function.hpp"

namespace ocf {

double rho_density(double x);
double rho_density_derivative(double x);
double rho_cdf(double x);
/// rho([lo, hi]).
double rho_measure(const Interval& a);

double limit_H(double x);

double xi_cdf(double w);
double xi_density(double w);

/// True when w lies in W1 = [0, g^2).
bool in_w1(double w);

/// Conditional law F_0(x, e) given the current state s (three-branch form).
double f0_conditional(double x, int e, double s);

/// Limit law F(x, e), by quadrature of the F_0 kernels against xi.
double limit_F(double x, int e);

enum class CdfKind { rho_on_unit, xi_on_0G, limit_H, limit_F_plus, limit_F_minus };

/// A closed-form distribution function together with its domain.
struct ClosedFormCDF {
  CdfKind kind;

  double lo() const { return 0.0; }
  double hi() const;
  double operator()(double x) const;
};

struct InvarianceResult {
  double measure = 0.0;           // rho(A)
  double preimage_measure = 0.0;  // rho(T^{-1} A)
  double residual = 0.0;          // |rho(T^{-1} A) - rho(A)|
  double tail_bound = 0.0;        // bound on the neglected part of the branch series
  long terms = 0;                 // branches summed explicitly
};

/// Twenty test intervals of [0, 1]: ten equal cells and ten intervals of
/// mixed length near 0, 1/2 and 1.
std::vector<Interval> invariance_suite();

inline constexpr double kInvarianceTailTolerance = 1e-13;

/// rho(T^{-1} A) summed over the explicit branch preimages of A, compared
/// with rho(A). Throws NumericalError when the tail cannot be brought under
/// tol within max_terms branches.
InvarianceResult t_invariance_check(const Interval& a, double tol = kInvarianceTailTolerance,
                                    long max_terms = 20'000'000);

}  // namespace ocf
