#pragma once

// Szusz iteration for the Gauss-Kuzmin problem of the odd continued fraction.
//
// With H_n(x) = P(T^n(x) < x) for x drawn from a non-atomic law on [0, 1],
//
//   H_{n+1}(x) = sum_{(i,e)} e (H_n(1/i) - H_n(1/(i + e x)))
//
// over odd i and e = +-1 with i + e > 1. The normalized densities
// h_n = H_n' / D, with D the shape of the invariant density, contract in
// the sup norm of their derivative at the rate eta.

#include <cstddef>

#include "ocf/grid_function.hpp"
#include "ocf/report.hpp"

namespace ocf {

inline constexpr std::size_t kDefaultKuzminGrid = 4097;
inline constexpr long kDefaultKuzminIMax = 20001;
/// Bound on the neglected part of the truncated series per step.
inline constexpr double kKuzminTailTolerance = 1e-8;

struct CdfIterate {
  GridFunction H;  // on [0, 1], monotone cubic
  int n = 0;
};

struct DensityIterate {
  GridFunction h;  // on [0, 1], cubic
  int n = 0;
};

struct RateConstant {
  double value = 0.0;
  double inner_sum = 0.0;
  double tail_bound = 0.0;
  long terms_used = 0;
};

/// D(x) = 1/(x + G - 1) - 1/(x - G - 1), the unnormalized invariant density.
double density_shape(double x);

/// V(x, (i, e)) = 1 / ((g t + 1)(G^2 t - 1)) with t = i + e x.
double V(double x, long i, int e);

/// H0 = identity sampled on n uniform nodes of [0, 1].
CdfIterate identity_cdf(std::size_t n = kDefaultKuzminGrid);

/// The normalized density of a CDF iterate, h = H' / D.
DensityIterate density_of(const CdfIterate& H);

CdfIterate kuzmin_step(const CdfIterate& H, long i_max = kDefaultKuzminIMax,
                       double tail_tol = kKuzminTailTolerance);

DensityIterate density_step(const DensityIterate& h, long i_max = kDefaultKuzminIMax,
                            double tail_tol = kKuzminTailTolerance);

/// eta = 4 g sum_{odd i} 1/((G + i) i (i + 2)), summed until the tail bound
/// 1/(4 (I - 2)^2) drops to tol.
RateConstant eta_constant(double tol = 1e-9);

/// max |h'| over the nodes by centered differences with step = grid spacing.
double derivative_sup(const DensityIterate& h);

struct KuzminOptions {
  int iterations = 12;
  long i_max = kDefaultKuzminIMax;
  double ratio_slack = 0.01;
  /// Rows before this index are not held to the ratio bound.
  int ratio_from = 2;
};

/// Rows n = 0..iterations with error = sup |H_n - limit_H| (that is, the
/// remainder R_n, which vanishes at 0 and 1), aux = M_n, ratio =
/// M_n / M_{n-1} and bound = eta + slack. A row is trustworthy while the
/// grid's difference quotients resolve M_n to 1% and sup |R_n| stays above
/// ten times the fixed-point residual of the discretization.
ConvergenceReport iterate_and_report(const CdfIterate& H0, const KuzminOptions& opts = {});

}  // namespace ocf
