#pragma once

// The Markov chain s_n = q_{n-1}/q_n on W = [0, G] and its transition
// operator
//
//   U f(w) = sum_{(e,i)} P(w, (e,i)) f(u(w, (e,i))),
//
// where (e, i) runs over {-1, +1} x {1, 3, 5, ...}. W splits into
// W1 = [0, g^2) and W2 = [g^2, G]; on W2 the pairs with e = -1 carry no mass.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ocf/grid_function.hpp"
#include "ocf/report.hpp"

namespace ocf {

struct PairIndex {
  int e = 1;
  long i = 1;

  /// Validating constructor: e = +-1, i odd and positive.
  static PairIndex make(int e, long i);
};

inline constexpr long kDefaultIMax = 20001;
inline constexpr std::size_t kDefaultChainGrid = 4097;
/// Fine grid of the operator convergence check; its coarse partner has half
/// the spacing count.
inline constexpr std::size_t kDefaultThGGrid = 16385;

double state_map_u(double w, PairIndex pair);
double kernel_P(double w, PairIndex pair);

/// sum over odd i >= J (J >= 3) of P(w, (e, i)), from the telescoping
/// partial-fraction form of the kernel.
double kernel_tail_mass(double w, int e, long J);

/// sum_{i <= i_max} P(w, .) plus the analytic tail beyond i_max.
double kernel_row_sum(double w, long i_max = kDefaultIMax);

/// Q(w, [0, y]) = mass of all pairs with u(w, pair) <= y, in closed form.
double transition_mass(double w, double y);

/// The discretized operator U on a fixed node set of [0, G], acting on
/// linearly interpolated grid functions. Rows are assembled once: pairs with
/// i <= i_max are placed by linear interpolation weights, and the remaining
/// mass (all of whose images lie in (0, 1/(i_max + 2 - g^2)]) is assigned to
/// the value at 0.
class TransitionOperator {
 public:
  explicit TransitionOperator(std::vector<double> nodes, long i_max = kDefaultIMax,
                              double tail_tol = 1e-6);

  /// n equispaced nodes on [0, G] with g^2 and its left neighbour inserted.
  static std::vector<double> default_nodes(std::size_t n = kDefaultChainGrid);

  /// Uf at every node. f must live on this operator's nodes with linear
  /// interpolation.
  GridFunction apply(const GridFunction& f) const;

  /// Uf(w) at an arbitrary state, summing the series against the interpolant.
  double apply_at(double w, const GridFunction& f) const;

  /// Uf(w) for an arbitrary bounded function, summing the series directly.
  template <class F>
  double apply_exact(double w, F&& f) const {
    double total = 0.0;
    for (int e : {1, -1}) {
      for (long i = 1; i <= i_max_; i += 2) {
        const PairIndex pair{e, i};
        const double p = kernel_P(w, pair);
        if (p != 0.0) total += p * f(state_map_u(w, pair));
      }
    }
    return total + tail_mass(w) * f(0.0);
  }

  /// Zero-valued grid function on the operator nodes.
  GridFunction zero() const;
  template <class F>
  GridFunction sample(F&& f) const {
    return GridFunction::sample(nodes_, std::forward<F>(f), Interp::linear);
  }

  const std::vector<double>& nodes() const { return nodes_; }
  long i_max() const { return i_max_; }
  /// Mass beyond i_max at state w (both signs).
  double tail_mass(double w) const;
  double max_tail_mass() const { return max_tail_mass_; }

 private:
  void check_tail(const GridFunction& f) const;

  std::vector<double> nodes_;
  long i_max_;
  double tail_tol_;
  double max_tail_mass_ = 0.0;
  GridFunction locator_;

  // CSR rows.
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> col_;
  std::vector<double> weight_;
};

/// Q^n(s0, [0, y]) = U^n f_y(s0) with f_y the indicator of [0, y]. The first
/// application is exact; later ones use the discretized operator.
double n_step_Q(const TransitionOperator& op, double s0, double y, int n);

/// Q(w, [0, y]) at every node of op, i.e. U f_y as a grid function.
GridFunction indicator_image(const TransitionOperator& op, double y);

/// |int Q(w, B) dQ^inf(w) - Q^inf(B)| for B = [lo, hi] in [0, G].
double stationarity_residual(const Interval& b);

struct VariationReport {
  double var_f = 0.0;
  double sup_f = 0.0;
  double var_Uf = 0.0;
  double bound = 0.0;  // theta1 var f + theta2 |f|
  bool satisfied = false;
};

inline constexpr double kProp1Slack = 1e-6;

/// Falsification check of var Uf <= theta1 var f + theta2 |f| for a grid
/// function on the operator nodes.
VariationReport check_prop1(const TransitionOperator& op, const GridFunction& f,
                            double slack = kProp1Slack);

/// Same check for the indicator f_y of [0, y], whose image is exact.
VariationReport check_prop1_indicator(const TransitionOperator& op, double y,
                                      double slack = kProp1Slack);

/// Piecewise-linear function on the operator nodes with 1 to 9 random jump
/// points in (0, G) and values in [-1, 1], drawn from (seed, index).
GridFunction random_bv_function(const TransitionOperator& op, std::uint64_t seed,
                                std::uint64_t index);

/// 101 equispaced states of [0, G].
std::vector<double> rowsum_states();

/// Ten test intervals of [0, G], several of them straddling g^2.
std::vector<Interval> stationarity_suite();

struct TheoremGConfig {
  std::vector<double> s0 = {0.0};
  int n_max = 12;
  std::vector<double> y_nodes;  // defaults to 21 equispaced points of [0, G]
  std::vector<double> x_nodes;  // defaults to 0.1, 0.2, ..., 1.0
  bool include_F = true;
};

/// Per-n maxima of |G_n(y) - xi(y)| (error) and |F_n(x,e) - F(x,e)| (aux)
/// against theta^n. F_n is obtained as U^n applied to the F_0 kernel, which
/// is the Stieltjes integral of that kernel against dG_n. The slack is the
/// difference between the fine and the coarse discretization; a row whose
/// slack exceeds theta^n / 10 is inconclusive.
ConvergenceReport theorem_thG_check(const TransitionOperator& fine,
                                    const TransitionOperator& coarse,
                                    const TheoremGConfig& config);

}  // namespace ocf
