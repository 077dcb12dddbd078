#include "ocf/measures.hpp"

#include <cmath>
#include <string>

#include "ocf/constants.hpp"
#include "ocf/errors.hpp"
#include "ocf/quadrature.hpp"
#include "ocf/series.hpp"

namespace ocf {

namespace {

void require_in(double v, double lo, double hi, const char* what) {
  if (!(v >= lo && v <= hi)) {
    throw DomainError(std::string(what) + " = " + std::to_string(v) + " outside [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

void require_sign(int e) {
  if (e != 1 && e != -1) throw DomainError("sign must be +1 or -1");
}

}  // namespace

double rho_density(double x) {
  require_in(x, 0.0, 1.0, "x");
  const auto& c = constants();
  return c.inv_3_log_G * (1.0 / (x + c.G - 1.0) - 1.0 / (x - c.G - 1.0));
}

double rho_density_derivative(double x) {
  const auto& c = constants();
  const double a = x + c.G - 1.0;
  const double b = x - c.G - 1.0;
  return c.inv_3_log_G * (-1.0 / (a * a) + 1.0 / (b * b));
}

double rho_cdf(double x) {
  require_in(x, 0.0, 1.0, "x");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const auto& c = constants();
  // Antiderivative of the density from 0: log((x+g)/g) - log((G+1-x)/(G+1)).
  return c.inv_3_log_G * (std::log1p(x / c.g) - std::log1p(-x / (c.G + 1.0)));
}

double rho_measure(const Interval& a) {
  if (a.lo > a.hi) throw DomainError("interval with lo > hi");
  return rho_cdf(a.hi) - rho_cdf(a.lo);
}

double limit_H(double x) {
  require_in(x, 0.0, 1.0, "x");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const auto& c = constants();
  return c.inv_3_log_G *
         std::log(((c.G + 1.0) * (c.G - 1.0 + x)) / ((c.G - 1.0) * (c.G + 1.0 - x)));
}

bool in_w1(double w) { return w < constants().g2; }

double xi_cdf(double w) {
  const auto& c = constants();
  require_in(w, 0.0, c.G, "w");
  if (w == 0.0) return 0.0;
  if (w == c.G) return 1.0;
  if (in_w1(w)) return c.inv_3_log_G * (std::log1p(w) - std::log1p(-w));
  return c.inv_3_log_G * std::log((1.0 + w) / (1.0 - c.g2));
}

double xi_density(double w) {
  const auto& c = constants();
  require_in(w, 0.0, c.G, "w");
  if (in_w1(w)) return c.inv_3_log_G * 2.0 / (1.0 - w * w);
  return c.inv_3_log_G / (1.0 + w);
}

double f0_conditional(double x, int e, double s) {
  require_in(x, 0.0, 1.0, "x");
  require_in(s, 0.0, constants().G, "s");
  require_sign(e);
  if (in_w1(s)) return (1.0 - s * s) * x / (2.0 * (1.0 + e * s * x));
  if (e == -1) return 0.0;
  return (1.0 + s) * x / (1.0 + s * x);
}

double limit_F(double x, int e) {
  require_in(x, 0.0, 1.0, "x");
  require_sign(e);
  const auto& c = constants();
  auto integrand = [x, e](double y) { return f0_conditional(x, e, y) * xi_density(y); };
  // The W1 piece stops just short of g^2 so the integrand keeps its W1 form.
  double total = integrate(integrand, 0.0, std::nextafter(c.g2, 0.0)).value;
  if (e == 1) total += integrate(integrand, c.g2, c.G).value;
  return total;
}

double ClosedFormCDF::hi() const { return kind == CdfKind::xi_on_0G ? constants().G : 1.0; }

double ClosedFormCDF::operator()(double x) const {
  switch (kind) {
    case CdfKind::rho_on_unit:
      return rho_cdf(x);
    case CdfKind::xi_on_0G:
      return xi_cdf(x);
    case CdfKind::limit_H:
      return limit_H(x);
    case CdfKind::limit_F_plus:
      return limit_F(x, 1);
    case CdfKind::limit_F_minus:
      return limit_F(x, -1);
  }
  return 0.0;
}

std::vector<Interval> invariance_suite() {
  std::vector<Interval> out;
  for (int k = 0; k < 10; ++k) out.push_back({k / 10.0, (k + 1) / 10.0});
  const std::vector<Interval> extra = {{0.0, 1e-3}, {0.0, 0.05},  {1e-4, 0.3}, {0.2, 0.7},
                                       {0.45, 0.55}, {0.33, 0.34}, {0.5, 1.0}, {0.9, 1.0},
                                       {0.999, 1.0}, {0.0, 1.0}};
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

InvarianceResult t_invariance_check(const Interval& a, double tol, long max_terms) {
  require_in(a.lo, 0.0, 1.0, "interval lo");
  require_in(a.hi, 0.0, 1.0, "interval hi");
  if (a.lo > a.hi) throw DomainError("interval with lo > hi");
  const auto& c = constants();

  // After removing the Taylor terms through third order, each of the four
  // evaluations R(1/(i -+ c)) with i >= J leaves at most M4 t^4 / 24,
  // t <= 1/(i - 1), where M4 bounds |rho'''| near 0.
  const double m4 = c.inv_3_log_G * (6.0 / std::pow(c.g, 4) + 6.0 / std::pow(c.G, 4));
  auto tail_bound = [m4](long J) { return m4 / 6.0 * series::odd_inverse_power(J, -1.0, 4); };

  long J = 101;
  while (tail_bound(J) > tol) {
    J = 2 * J + 1;
    if (J > max_terms) {
      long need = J;
      while (tail_bound(need) > tol) need = 2 * need + 1;
      throw NumericalError("branch series tail above tolerance", tail_bound(max_terms), need);
    }
  }

  const double lo = a.lo;
  const double hi = a.hi;
  // Branch i = 1, e = +1: preimage [1/(1+hi), 1/(1+lo)].
  double sum = rho_cdf(1.0 / (1.0 + lo)) - rho_cdf(1.0 / (1.0 + hi));
  // Odd i >= 3, both signs: [1/(i+hi), 1/(i+lo)] and [1/(i-lo), 1/(i-hi)].
  for (long i = 3; i < J; i += 2) {
    const double di = static_cast<double>(i);
    sum += (rho_cdf(1.0 / (di - hi)) - rho_cdf(1.0 / (di + hi))) -
           (rho_cdf(1.0 / (di - lo)) - rho_cdf(1.0 / (di + lo)));
  }

  const double r1 = rho_density(0.0);
  const double r2 = rho_density_derivative(0.0) / 2.0;
  const double r3 = c.inv_3_log_G * (2.0 / std::pow(c.g, 3) + 2.0 / std::pow(c.G + 1.0, 3)) / 6.0;
  auto tail = [&](double v) {
    if (v == 0.0) return 0.0;
    return r1 * series::odd_inverse_difference(J, v) +
           r2 * series::odd_inverse_square_difference(J, v) +
           r3 * (series::odd_inverse_power(J, -v, 3) - series::odd_inverse_power(J, v, 3));
  };
  sum += tail(hi) - tail(lo);

  InvarianceResult out;
  out.measure = rho_measure(a);
  out.preimage_measure = sum;
  out.residual = std::abs(sum - out.measure);
  out.tail_bound = tail_bound(J);
  out.terms = J;
  return out;
}

}  // namespace ocf
