#include "ocf/kuzmin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ocf/constants.hpp"
#include "ocf/errors.hpp"
#include "ocf/measures.hpp"
#include "ocf/parallel.hpp"
#include "ocf/series.hpp"

namespace ocf {

namespace {

void require_unit_grid(const GridFunction& f, const char* what) {
  if (f.size() < 5 || f.lo() != 0.0 || f.hi() != 1.0) {
    throw ValidationError(std::string(what) + " must live on a grid of [0, 1] with >= 5 nodes");
  }
}

void require_i_max(long i_max) {
  if (i_max < 3 || i_max % 2 == 0) throw ValidationError("i_max must be odd and >= 3");
}

// Depth whose last-term estimate would meet tol, given the estimate at i_max
// and a decay like i_max^-order.
long suggested_depth(long i_max, double estimate, double tol, double order) {
  long need = static_cast<long>(std::ceil(i_max * std::pow(estimate / tol, 1.0 / order)));
  return need % 2 == 0 ? need + 1 : need;
}

}  // namespace

double density_shape(double x) {
  const auto& c = constants();
  return 1.0 / (x + c.g) - 1.0 / (x - c.G - 1.0);
}

double V(double x, long i, int e) {
  const auto& c = constants();
  if (i < 1 || i % 2 == 0 || (e != 1 && e != -1) || i + e <= 1) {
    throw ValidationError("V needs an admissible pair (i, e)");
  }
  const double t = static_cast<double>(i) + e * x;
  return 1.0 / ((c.g * t + 1.0) * (c.G * c.G * t - 1.0));
}

CdfIterate identity_cdf(std::size_t n) {
  return CdfIterate{GridFunction::sample(uniform_nodes(0.0, 1.0, n), [](double x) { return x; },
                                         Interp::monotone_cubic),
                    0};
}

DensityIterate density_of(const CdfIterate& H) {
  require_unit_grid(H.H, "CDF iterate");
  auto nodes = std::vector<double>(H.H.nodes().begin(), H.H.nodes().end());
  auto h = GridFunction::sample(
      std::move(nodes), [&](double x) { return H.H.derivative(x) / density_shape(x); },
      Interp::cubic);
  return DensityIterate{std::move(h), H.n};
}

CdfIterate kuzmin_step(const CdfIterate& it, long i_max, double tail_tol) {
  const GridFunction& H = it.H;
  require_unit_grid(H, "CDF iterate");
  require_i_max(i_max);
  if (H.values().front() != 0.0 || H.values().back() != 1.0) {
    throw ValidationError("CDF iterate must have H(0) = 0 and H(1) = 1");
  }

  // Beyond i_max the differences H(1/(i-x)) - H(1/(i+x)) are summed from the
  // Taylor expansion of H at 0.
  const double c1 = H.derivative(0.0);
  const auto nodes = H.nodes();
  const double dx = nodes[1] - nodes[0];
  const double c2 = (H.derivative(dx) - c1) / (2.0 * dx);
  const long J = i_max + 2;

  std::vector<double> out(H.size());
  std::vector<double> tail_size(H.size());
  parallel_for(H.size(), [&](std::size_t k) {
    const double x = nodes[k];
    double acc = H(1.0) - H(1.0 / (1.0 + x));
    for (long i = 3; i <= i_max; i += 2) {
      const double di = static_cast<double>(i);
      acc += H(1.0 / (di - x)) - H(1.0 / (di + x));
    }
    const double second = c2 * series::odd_inverse_square_difference(J, x);
    out[k] = acc + c1 * series::odd_inverse_difference(J, x) + second;
    tail_size[k] = std::abs(second);
  });

  const double tail_estimate = *std::max_element(tail_size.begin(), tail_size.end());
  if (tail_estimate > tail_tol) {
    throw NumericalError("kuzmin_step: series tail above tolerance", tail_estimate,
                         suggested_depth(i_max, tail_estimate, tail_tol, 2.0));
  }
  // Both endpoint values telescope; at x = 1 only up to the series tail.
  if (out.front() != 0.0 || std::abs(out.back() - 1.0) > tail_tol) {
    throw NumericalError("kuzmin_step: endpoint values not preserved",
                         std::max(std::abs(out.front()), std::abs(out.back() - 1.0)));
  }
  out.back() = 1.0;
  return CdfIterate{H.with_values(std::move(out)), it.n + 1};
}

DensityIterate density_step(const DensityIterate& it, long i_max, double tail_tol) {
  const GridFunction& h = it.h;
  require_unit_grid(h, "density iterate");
  require_i_max(i_max);

  const auto& c = constants();
  auto Hprime = [&h](double u) { return h(u) * density_shape(u); };
  // H'(u) ~ d0 + d1 u near 0; D'(0) = -1/g^2 + 1/(G + 1)^2.
  const double d_shape0 = -1.0 / (c.g * c.g) + 1.0 / ((c.G + 1.0) * (c.G + 1.0));
  const double d0 = h(0.0) * density_shape(0.0);
  const double d1 = h.derivative(0.0) * density_shape(0.0) + h(0.0) * d_shape0;
  const long J = i_max + 2;

  const auto nodes = h.nodes();
  std::vector<double> out(h.size());
  std::vector<double> tail_size(h.size());
  parallel_for(h.size(), [&](std::size_t k) {
    const double x = nodes[k];
    const double t1 = 1.0 + x;
    double acc = Hprime(1.0 / t1) / (t1 * t1);
    for (long i = 3; i <= i_max; i += 2) {
      const double tp = static_cast<double>(i) + x;
      const double tm = static_cast<double>(i) - x;
      acc += Hprime(1.0 / tp) / (tp * tp) + Hprime(1.0 / tm) / (tm * tm);
    }
    const double first = d0 * (series::odd_inverse_power(J, x, 2) +
                               series::odd_inverse_power(J, -x, 2));
    const double second = d1 * (series::odd_inverse_power(J, x, 3) +
                                series::odd_inverse_power(J, -x, 3));
    out[k] = (acc + first + second) / density_shape(x);
    tail_size[k] = std::abs(second);
  });

  const double tail_estimate = *std::max_element(tail_size.begin(), tail_size.end());
  if (tail_estimate > tail_tol) {
    throw NumericalError("density_step: series tail above tolerance", tail_estimate,
                         suggested_depth(i_max, tail_estimate, tail_tol, 2.0));
  }
  return DensityIterate{h.with_values(std::move(out)), it.n + 1};
}

RateConstant eta_constant(double tol) {
  if (!(tol > 0.0)) throw ValidationError("eta_constant: tolerance must be positive");
  const auto& c = constants();
  // Smallest odd I >= 3 with 1/(4 (I - 2)^2) <= tol.
  const long I = series::odd_ceil(std::max(3.0, 2.0 + 1.0 / (2.0 * std::sqrt(tol))));
  RateConstant r;
  // Summed from the smallest terms up.
  for (long i = I - 2; i >= 1; i -= 2) {
    const double di = static_cast<double>(i);
    r.inner_sum += 1.0 / ((c.G + di) * di * (di + 2.0));
    ++r.terms_used;
  }
  r.tail_bound = 1.0 / (4.0 * static_cast<double>(I - 2) * static_cast<double>(I - 2));
  r.value = 4.0 * c.g * r.inner_sum;
  return r;
}

double derivative_sup(const DensityIterate& h) {
  double m = 0.0;
  for (double d : node_derivatives(h.h)) m = std::max(m, std::abs(d));
  return m;
}

ConvergenceReport iterate_and_report(const CdfIterate& H0, const KuzminOptions& opts) {
  if (opts.iterations < 0) throw ValidationError("iterations must be >= 0");
  const RateConstant eta = eta_constant();

  // Residual of the discretized step at its fixed point: below this level
  // sup |R_n| says nothing about the iteration.
  const auto nodes = std::vector<double>(H0.H.nodes().begin(), H0.H.nodes().end());
  const CdfIterate limit{GridFunction::sample(nodes, limit_H, Interp::monotone_cubic), 0};
  const GridFunction limit_next = kuzmin_step(limit, opts.i_max).H;
  double floor = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    floor = std::max(floor, std::abs(limit_next.values()[k] - limit.H.values()[k]));
  }

  ConvergenceReport report;
  CdfIterate H = H0;
  DensityIterate h = density_of(H0);
  bool window_open = true;
  std::vector<int> fit_n;
  std::vector<double> fit_m;
  for (int n = 0; n <= opts.iterations; ++n) {
    if (n > 0) {
      H = kuzmin_step(H, opts.i_max);
      h = density_step(h, opts.i_max);
    }
    ConvergenceRow row;
    row.n = n;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      row.error = std::max(row.error, std::abs(H.H.values()[k] - limit_H(nodes[k])));
    }
    row.aux = derivative_sup(h);
    double m_slopes = 0.0;
    for (double s : h.h.slopes()) m_slopes = std::max(m_slopes, std::abs(s));
    row.slack = std::abs(row.aux - m_slopes);
    row.bound = eta.value + opts.ratio_slack;
    if (!report.rows.empty() && report.rows.back().aux > 0.0) {
      row.ratio = row.aux / report.rows.back().aux;
    }
    row.trustworthy = window_open && row.slack <= 0.01 * row.aux && row.error > 10.0 * floor;
    window_open = row.trustworthy;
    if (!row.trustworthy) {
      row.verdict = Verdict::inconclusive;
    } else if (n >= opts.ratio_from && row.ratio) {
      row.verdict = *row.ratio <= row.bound ? Verdict::pass : Verdict::fail;
    } else {
      row.verdict = Verdict::pass;
    }
    if (row.trustworthy) {
      report.last_trustworthy_n = n;
      if (n >= opts.ratio_from) {
        fit_n.push_back(n);
        fit_m.push_back(row.aux);
      }
    }
    report.rows.push_back(row);
  }
  if (!report.last_trustworthy_n || *report.last_trustworthy_n < opts.iterations) {
    report.notes.push_back("rows after the last trustworthy n are below the discretization level");
  }
  if (fit_n.size() >= 4) {
    report.fitted_rate = rate_fit(fit_n, fit_m);
  } else {
    report.notes.push_back("fewer than four trustworthy rows; no rate fit");
  }
  return report;
}

}  // namespace ocf
