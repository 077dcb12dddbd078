#include "ocf/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ocf/errors.hpp"

namespace ocf {

namespace {

// Derivative at x[k] of the Lagrange polynomial through (x[j], y[j]).
double lagrange_derivative_at_node(std::span<const double> x, std::span<const double> y,
                                   std::size_t k) {
  const std::size_t m = x.size();
  double result = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double weight;
    if (j == k) {
      weight = 0.0;
      for (std::size_t l = 0; l < m; ++l) {
        if (l != k) weight += 1.0 / (x[k] - x[l]);
      }
    } else {
      weight = 1.0 / (x[j] - x[k]);
      for (std::size_t l = 0; l < m; ++l) {
        if (l != j && l != k) weight *= (x[k] - x[l]) / (x[j] - x[l]);
      }
    }
    result += weight * y[j];
  }
  return result;
}

// Stencil of `width` consecutive nodes containing k, as centered as the
// boundaries allow.
double stencil_derivative(std::span<const double> x, std::span<const double> y, std::size_t k,
                          std::size_t width) {
  const std::size_t n = x.size();
  width = std::min(width, n);
  std::size_t first = k >= width / 2 ? k - width / 2 : 0;
  if (first + width > n) first = n - width;
  return lagrange_derivative_at_node(x.subspan(first, width), y.subspan(first, width), k - first);
}

}  // namespace

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values, Interp interp)
    : nodes_(std::move(nodes)), values_(std::move(values)), interp_(interp) {
  if (nodes_.size() < 2) throw ValidationError("grid function needs at least two nodes");
  if (nodes_.size() != values_.size()) throw ValidationError("node/value size mismatch");
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    if (!(nodes_[k] < nodes_[k + 1])) {
      throw ValidationError("grid nodes must be strictly increasing (index " + std::to_string(k) +
                            ")");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("grid function values must be finite");
  }
  build_locator();
  build_slopes();
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
  if (values.size() != nodes_.size()) throw ValidationError("node/value size mismatch");
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("grid function values must be finite");
  }
  GridFunction out;
  out.nodes_ = nodes_;
  out.values_ = std::move(values);
  out.interp_ = interp_;
  out.bucket_width_ = bucket_width_;
  out.bucket_first_ = bucket_first_;
  out.build_slopes();
  return out;
}

void GridFunction::build_locator() {
  const std::size_t buckets = nodes_.size();
  bucket_width_ = (hi() - lo()) / static_cast<double>(buckets);
  bucket_first_.resize(buckets + 1);
  std::size_t k = 0;
  for (std::size_t b = 0; b <= buckets; ++b) {
    const double start = lo() + bucket_width_ * static_cast<double>(b);
    while (k + 2 < nodes_.size() && nodes_[k + 1] <= start) ++k;
    bucket_first_[b] = k;
  }
}

void GridFunction::build_slopes() {
  slopes_.clear();
  if (interp_ == Interp::linear) return;

  const std::size_t n = nodes_.size();
  slopes_.resize(n);
  for (std::size_t k = 0; k < n; ++k) slopes_[k] = stencil_derivative(nodes_, values_, k, 5);
  if (interp_ != Interp::monotone_cubic) return;

  // Fritsch-Carlson: zero slopes at extrema and flat cells, then scale each
  // cell's slope pair into the monotonicity region alpha^2 + beta^2 <= 9.
  std::vector<double> secant(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    secant[k] = (values_[k + 1] - values_[k]) / (nodes_[k + 1] - nodes_[k]);
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (secant[k - 1] * secant[k] <= 0.0) slopes_[k] = 0.0;
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (secant[k] == 0.0) {
      slopes_[k] = 0.0;
      slopes_[k + 1] = 0.0;
      continue;
    }
    double alpha = slopes_[k] / secant[k];
    double beta = slopes_[k + 1] / secant[k];
    if (alpha < 0.0) slopes_[k] = alpha = 0.0;
    if (beta < 0.0) slopes_[k + 1] = beta = 0.0;
    const double r2 = alpha * alpha + beta * beta;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      slopes_[k] = tau * alpha * secant[k];
      slopes_[k + 1] = tau * beta * secant[k];
    }
  }
}

std::size_t GridFunction::locate(double t) const {
  const std::size_t last_cell = nodes_.size() - 2;
  if (t <= lo()) return 0;
  if (t >= hi()) return last_cell;
  auto b = static_cast<std::size_t>((t - lo()) / bucket_width_);
  if (b >= bucket_first_.size()) b = bucket_first_.size() - 1;
  std::size_t k = bucket_first_[b];
  while (k > 0 && nodes_[k] > t) --k;
  while (k < last_cell && nodes_[k + 1] <= t) ++k;
  return k;
}

double GridFunction::operator()(double t) const {
  const double span = hi() - lo();
  if (t < lo() - 1e-12 * span || t > hi() + 1e-12 * span || std::isnan(t)) {
    throw DomainError("grid function evaluated outside its domain at " + std::to_string(t));
  }
  t = std::clamp(t, lo(), hi());
  const std::size_t k = locate(t);
  const double h = nodes_[k + 1] - nodes_[k];
  const double s = (t - nodes_[k]) / h;
  const double y0 = values_[k];
  const double y1 = values_[k + 1];
  if (interp_ == Interp::linear) return y0 + s * (y1 - y0);

  const double one_minus = 1.0 - s;
  const double h00 = (1.0 + 2.0 * s) * one_minus * one_minus;
  const double h10 = s * one_minus * one_minus;
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * y0 + h10 * h * slopes_[k] + h01 * y1 + h11 * h * slopes_[k + 1];
}

double GridFunction::derivative(double t) const {
  t = std::clamp(t, lo(), hi());
  const std::size_t k = locate(t);
  const double h = nodes_[k + 1] - nodes_[k];
  const double s = (t - nodes_[k]) / h;
  const double y0 = values_[k];
  const double y1 = values_[k + 1];
  if (interp_ == Interp::linear) return (y1 - y0) / h;

  const double d00 = 6.0 * s * s - 6.0 * s;
  const double d10 = 3.0 * s * s - 4.0 * s + 1.0;
  const double d01 = -d00;
  const double d11 = 3.0 * s * s - 2.0 * s;
  return (d00 * y0 + d01 * y1) / h + d10 * slopes_[k] + d11 * slopes_[k + 1];
}

std::vector<double> uniform_nodes(double lo, double hi, std::size_t n) {
  if (n < 2) throw ValidationError("need at least two nodes");
  if (!(lo < hi)) throw ValidationError("empty node range");
  std::vector<double> nodes(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) nodes[k] = lo + step * static_cast<double>(k);
  nodes.back() = hi;
  return nodes;
}

std::vector<double> insert_breakpoint(std::vector<double> nodes, double b, bool with_left_limit) {
  auto insert_one = [&nodes](double v) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    if (it == nodes.end() || *it != v) nodes.insert(it, v);
  };
  insert_one(b);
  if (with_left_limit) {
    const double left = std::nextafter(b, -std::numeric_limits<double>::infinity());
    if (left >= nodes.front()) insert_one(left);
  }
  return nodes;
}

double variation(const GridFunction& f, const Interval& sub) {
  if (sub.lo > sub.hi) throw ValidationError("interval with lo > hi");
  const auto nodes = f.nodes();
  const auto values = f.values();
  double total = 0.0;
  double prev = f(sub.lo);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k] <= sub.lo || nodes[k] >= sub.hi) continue;
    total += std::abs(values[k] - prev);
    prev = values[k];
  }
  total += std::abs(f(sub.hi) - prev);
  return total;
}

double variation(const GridFunction& f) { return variation(f, Interval{f.lo(), f.hi()}); }

double sup_norm(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> node_derivatives(const GridFunction& f) {
  const auto nodes = f.nodes();
  const auto values = f.values();
  std::vector<double> d(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) d[k] = stencil_derivative(nodes, values, k, 3);
  return d;
}

}  // namespace ocf
