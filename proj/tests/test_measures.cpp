#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ocf/constants.hpp"
#include "ocf/errors.hpp"
#include "ocf/measures.hpp"

using namespace ocf;

namespace {

const double G = (1.0 + std::sqrt(5.0)) / 2.0;
const double g = 1.0 / G;
const double g2 = g * g;
const double C = 1.0 / (3.0 * std::log(G));

// Composite Simpson rule, independent of the library quadrature.
template <class F>
double simpson(F&& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("golden constants") {
  const auto& c = constants();
  CHECK(std::abs(c.G * c.G - c.G - 1.0) < 1e-15);
  CHECK(c.g * c.G == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.g2 == doctest::Approx(g2).epsilon(1e-15));
  CHECK(c.theta1 + c.theta2 == doctest::Approx(c.theta).epsilon(1e-6));
}

TEST_CASE("invariant density examples") {
  CHECK(rho_cdf(0.0) == 0.0);
  CHECK(rho_cdf(1.0) == 1.0);
  CHECK(std::abs(rho_cdf(g) - 2.0 / 3.0) < 1e-14);
  // 1/g + 1/(G + 1) = 2.
  CHECK(std::abs(rho_density(0.0) - 2.0 * C) < 1e-14);
  CHECK(std::abs(rho_density(1.0) - 2.0 * C / G) < 1e-14);
  CHECK(std::abs(simpson(rho_density, 0.0, 1.0) - 1.0) < 1e-12);
}

TEST_CASE("invariant density in symmetric form") {
  for (int k = 0; k <= 10; ++k) {
    const double x = k / 10.0;
    const double sym = C * (1.0 / (G - 1.0 + x) + 1.0 / (G + 1.0 - x));
    CHECK(std::abs(rho_density(x) - sym) < 1e-14);
    const double quad = C * 2.0 * G / ((G + 1.0) - (1.0 - x) * (1.0 - x));
    CHECK(std::abs(rho_density(x) - quad) < 1e-14);
    // Derivative against a central difference.
    if (k > 0 && k < 10) {
      const double h = 1e-5;
      const double fd = (rho_density(x + h) - rho_density(x - h)) / (2 * h);
      CHECK(std::abs(rho_density_derivative(x) - fd) < 1e-8);
    }
  }
}

TEST_CASE("rho CDF integrates its density") {
  for (int k = 1; k <= 20; ++k) {
    const double x = k / 20.0;
    CHECK(std::abs(rho_cdf(x) - simpson(rho_density, 0.0, x, 2000)) < 1e-12);
  }
}

TEST_CASE("Gauss-Kuzmin limit equals the invariant CDF") {
  double prev = -1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double x = k / 1000.0;
    CHECK(std::abs(limit_H(x) - rho_cdf(x)) < 1e-12);
    CHECK(limit_H(x) > prev);
    prev = limit_H(x);
  }
}

TEST_CASE("stationary law of the chain") {
  CHECK(xi_cdf(0.0) == 0.0);
  CHECK(xi_cdf(G) == 1.0);
  // Continuous at the split point.
  CHECK(std::abs(xi_cdf(std::nextafter(g2, 0.0)) - xi_cdf(g2)) < 1e-14);
  // Mass of W1 from the antiderivative of 2C/(1 - w^2).
  CHECK(std::abs(xi_cdf(g2) - C * std::log((1 + g2) / (1 - g2))) < 1e-14);
  const double w1 = simpson(xi_density, 0.0, std::nextafter(g2, 0.0));
  const double w2 = simpson(xi_density, g2, G);
  CHECK(std::abs(w1 + w2 - 1.0) < 1e-12);
  CHECK(std::abs(w1 - xi_cdf(g2)) < 1e-12);
  CHECK(in_w1(0.0));
  CHECK_FALSE(in_w1(g2));
  double prev = -1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double w = G * k / 1000.0;
    const double v = xi_cdf(std::min(w, G));
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("conditional law of the next tail") {
  // At s = 0 both signs carry x/2.
  CHECK(f0_conditional(0.5, 1, 0.0) == doctest::Approx(0.25));
  CHECK(f0_conditional(0.5, -1, 0.0) == doctest::Approx(0.25));
  // On W2 the negative sign carries nothing and the positive sign everything.
  CHECK(f0_conditional(0.7, -1, 1.0) == 0.0);
  CHECK(f0_conditional(1.0, 1, 1.0) == doctest::Approx(1.0));
  CHECK(f0_conditional(0.5, 1, 1.0) == doctest::Approx(2.0 * 0.5 / 1.5));
  // On W1 the two signs sum to 1 at x = 1.
  for (double s : {0.0, 0.1, 0.2, 0.3, 0.38}) {
    CHECK(f0_conditional(1.0, 1, s) + f0_conditional(1.0, -1, s) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(f0_conditional(1.5, 1, 0.0), DomainError);
  CHECK_THROWS_AS(f0_conditional(0.5, 0, 0.0), DomainError);
  CHECK_THROWS_AS(f0_conditional(0.5, 1, 2.0), DomainError);
}

TEST_CASE("limit F has closed forms") {
  // Integrating the conditional law against xi: F(x, +1) = C log(1 + G x)
  // and F(x, -1) = -C log(1 - g^2 x).
  for (int k = 0; k <= 10; ++k) {
    const double x = k / 10.0;
    CHECK(std::abs(limit_F(x, 1) - C * std::log1p(G * x)) < 1e-12);
    CHECK(std::abs(limit_F(x, -1) + C * std::log1p(-g2 * x)) < 1e-12);
  }
  CHECK(std::abs(limit_F(1.0, 1) + limit_F(1.0, -1) - 1.0) < 1e-12);
  const ClosedFormCDF plus{CdfKind::limit_F_plus};
  const ClosedFormCDF xi{CdfKind::xi_on_0G};
  CHECK(plus.hi() == 1.0);
  CHECK(xi.hi() == doctest::Approx(G));
  CHECK(plus(0.3) == doctest::Approx(limit_F(0.3, 1)));
}

TEST_CASE("invariance examples") {
  const auto whole = t_invariance_check({0.0, 1.0});
  CHECK(whole.measure == doctest::Approx(1.0));
  CHECK(whole.residual < 1e-10);
  const auto half = t_invariance_check({0.0, 0.5});
  CHECK(half.residual < 1e-10);
  CHECK(half.tail_bound <= kInvarianceTailTolerance);
  const auto third = t_invariance_check({1.0 / 3.0, 2.0 / 3.0});
  CHECK(third.residual < 1e-10);
  CHECK(third.measure == doctest::Approx(rho_cdf(2.0 / 3.0) - rho_cdf(1.0 / 3.0)));
}

TEST_CASE("invariance over the interval suite") {
  const auto suite = invariance_suite();
  CHECK(suite.size() == 20);
  for (const auto& a : suite) {
    const auto r = t_invariance_check(a);
    CHECK(r.residual < 1e-10);
    CHECK(r.tail_bound <= kInvarianceTailTolerance);
  }
}

TEST_CASE("invariance by brute-force preimages") {
  // rho(T^{-1}[0, y]) summed branch by branch with an independent loop over
  // the inverse branches x = 1/(a + e t).
  for (double y : {0.1, 0.37, 0.8}) {
    double pre = 0.0;
    for (long a = 1; a < 2'000'001; a += 2) {
      // e = +1: t in [0, y] <-> x in [1/(a + y), 1/a].
      pre += rho_cdf(1.0 / a) - rho_cdf(1.0 / (a + y));
      if (a >= 3) pre += rho_cdf(1.0 / (a - y)) - rho_cdf(1.0 / a);
    }
    CHECK(std::abs(pre - rho_cdf(y)) < 1e-6);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(rho_cdf(-0.1), DomainError);
  CHECK_THROWS_AS(rho_density(1.1), DomainError);
  CHECK_THROWS_AS(xi_cdf(2.0), DomainError);
  CHECK_THROWS_AS(limit_H(-1.0), DomainError);
  CHECK_THROWS_AS(limit_F(0.5, 2), DomainError);
  CHECK_THROWS_AS(rho_measure({0.6, 0.4}), DomainError);
}
