#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ocf {

enum class Interp {
  linear,
  monotone_cubic,  // Hermite cubic with Fritsch-Carlson limited slopes
  cubic,           // Hermite cubic with unlimited fourth-order slopes
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = false;
  bool hi_open = false;
};

/// A real function sampled at strictly increasing nodes together with an
/// interpolation rule. Evaluation at a node returns the stored value.
///
/// Jumps are represented by a node pair (b', b) where b' = nextafter(b, -inf);
/// the cubic rules need well-spaced nodes and should not be used with such
/// pairs.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(std::vector<double> nodes, std::vector<double> values,
               Interp interp = Interp::linear);

  template <class F>
  static GridFunction sample(std::vector<double> nodes, F&& f, Interp interp = Interp::linear) {
    std::vector<double> values(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) values[k] = f(nodes[k]);
    return GridFunction(std::move(nodes), std::move(values), interp);
  }

  /// Same nodes and rule, new values.
  GridFunction with_values(std::vector<double> values) const;

  double operator()(double t) const;
  double derivative(double t) const;

  /// Index k with nodes[k] <= t < nodes[k+1] (the last cell for t = hi).
  std::size_t locate(double t) const;

  std::size_t size() const { return nodes_.size(); }
  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }
  Interp interp() const { return interp_; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> values() const { return values_; }
  /// Hermite slopes at the nodes (empty for linear interpolation).
  std::span<const double> slopes() const { return slopes_; }

 private:
  void build_locator();
  void build_slopes();

  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  Interp interp_ = Interp::linear;

  double bucket_width_ = 1.0;
  std::vector<std::size_t> bucket_first_;
};

/// n equispaced nodes on [lo, hi], both endpoints exact.
std::vector<double> uniform_nodes(double lo, double hi, std::size_t n);

/// Inserts b (and, when with_left_limit is set, nextafter(b, -inf)) into a
/// sorted node vector, skipping values that are already present.
std::vector<double> insert_breakpoint(std::vector<double> nodes, double b, bool with_left_limit);

/// Total variation of the interpolant over sub, from node values. The
/// interpolant is taken to be monotone between consecutive nodes.
double variation(const GridFunction& f, const Interval& sub);
double variation(const GridFunction& f);

/// max |f| over the nodes.
double sup_norm(const GridFunction& f);

/// Centered finite differences at the nodes (second-order on non-uniform
/// grids), one-sided second-order stencils at the two endpoints.
std::vector<double> node_derivatives(const GridFunction& f);

}  // namespace ocf
