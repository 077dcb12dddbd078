#include "ocf/markov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "ocf/constants.hpp"
#include "ocf/errors.hpp"
#include "ocf/measures.hpp"
#include "ocf/parallel.hpp"
#include "ocf/quadrature.hpp"
#include "ocf/series.hpp"

namespace ocf {

namespace {

void require_state(double w) {
  if (!(w >= 0.0 && w <= constants().G)) {
    throw DomainError("state w = " + std::to_string(w) + " outside [0, G]");
  }
}

// Unchecked kernel pieces shared by the public functions and the operator.
inline double u_raw(double w, int e, double i) {
  if (e == 1) return 1.0 / (i + w);
  return in_w1(w) ? 1.0 / (i - w) : 1.0 / (i - constants().g2);
}

inline double p_raw(double w, int e, long i) {
  const double d = (i == 1) ? 1.0 : 0.0;
  const double di = static_cast<double>(i);
  if (in_w1(w)) {
    return (1.0 - w * w) * (2.0 - d) / (2.0 * (di - 1.0 + d + e * w) * (di + 1.0 + e * w));
  }
  if (e == -1) return 0.0;
  return (1.0 + w) * (2.0 - d) / ((di - 1.0 + d + w) * (di + 1.0 + w));
}

// sum_{odd i >= J} P(w, (e, i)) for J >= 3, J possibly beyond long range.
inline double tail_raw(double w, int e, double J) {
  if (in_w1(w)) return (1.0 - w * w) / (2.0 * (J - 1.0 + e * w));
  if (e == -1) return 0.0;
  return (1.0 + w) / (J - 1.0 + w);
}

// Total mass of the pairs with sign e at state w.
inline double sign_mass(double w, int e) {
  if (in_w1(w)) return e == 1 ? (1.0 - w) / 2.0 : (1.0 + w) / 2.0;
  return e == 1 ? 1.0 : 0.0;
}

// Mass of the pairs (e, i) with u(w, (e, i)) <= y.
double sign_mass_below(double w, int e, double y) {
  if (y <= 0.0) return 0.0;
  if (e == -1 && !in_w1(w)) return 0.0;
  // u is decreasing in i; find the smallest odd i with u <= y.
  const double v = (e == 1) ? 1.0 / y - w : 1.0 / y + w;
  if (v > 1e15) return tail_raw(w, e, v);
  long i0 = series::odd_ceil(v);
  while (i0 > 1 && u_raw(w, e, static_cast<double>(i0 - 2)) <= y) i0 -= 2;
  while (u_raw(w, e, static_cast<double>(i0)) > y) i0 += 2;
  if (i0 == 1) return sign_mass(w, e);
  return tail_raw(w, e, static_cast<double>(i0));
}

}  // namespace

PairIndex PairIndex::make(int e, long i) {
  if (e != 1 && e != -1) throw ValidationError("pair sign must be +1 or -1");
  if (i < 1 || i % 2 == 0) throw ValidationError("pair index must be odd and positive");
  return PairIndex{e, i};
}

double state_map_u(double w, PairIndex pair) {
  require_state(w);
  PairIndex::make(pair.e, pair.i);
  return u_raw(w, pair.e, static_cast<double>(pair.i));
}

double kernel_P(double w, PairIndex pair) {
  require_state(w);
  PairIndex::make(pair.e, pair.i);
  return p_raw(w, pair.e, pair.i);
}

double kernel_tail_mass(double w, int e, long J) {
  require_state(w);
  if (J < 3 || J % 2 == 0) throw ValidationError("tail start must be odd and >= 3");
  if (e != 1 && e != -1) throw ValidationError("pair sign must be +1 or -1");
  return tail_raw(w, e, static_cast<double>(J));
}

double kernel_row_sum(double w, long i_max) {
  require_state(w);
  if (i_max < 1 || i_max % 2 == 0) throw ValidationError("i_max must be odd and positive");
  double total = 0.0;
  for (int e : {1, -1}) {
    for (long i = 1; i <= i_max; i += 2) total += p_raw(w, e, i);
    total += tail_raw(w, e, static_cast<double>(i_max + 2));
  }
  return total;
}

double transition_mass(double w, double y) {
  require_state(w);
  if (y >= constants().G) return 1.0;
  return sign_mass_below(w, 1, y) + sign_mass_below(w, -1, y);
}

TransitionOperator::TransitionOperator(std::vector<double> nodes, long i_max, double tail_tol)
    : nodes_(std::move(nodes)), i_max_(i_max), tail_tol_(tail_tol) {
  const auto& c = constants();
  if (i_max_ < 1 || i_max_ % 2 == 0) throw ValidationError("i_max must be odd and positive");
  if (!(tail_tol_ > 0.0)) throw ValidationError("tail tolerance must be positive");
  if (nodes_.size() < 2 || nodes_.front() != 0.0 || nodes_.back() != c.G) {
    throw ValidationError("operator nodes must span [0, G] exactly");
  }
  locator_ = GridFunction(nodes_, std::vector<double>(nodes_.size(), 0.0));

  const std::size_t n = nodes_.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
  parallel_for(n, [&](std::size_t r) {
    thread_local std::vector<double> dense;
    thread_local std::vector<std::size_t> touched;
    dense.assign(n, 0.0);
    touched.clear();
    auto deposit = [&](std::size_t k, double wgt) {
      if (dense[k] == 0.0) touched.push_back(k);
      dense[k] += wgt;
    };

    const double w = nodes_[r];
    for (int e : {1, -1}) {
      for (long i = 1; i <= i_max_; i += 2) {
        const double p = p_raw(w, e, i);
        if (p == 0.0) continue;
        const double u = u_raw(w, e, static_cast<double>(i));
        const std::size_t k = locator_.locate(u);
        const double s = (u - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
        deposit(k, p * (1.0 - s));
        deposit(k + 1, p * s);
      }
    }
    deposit(0, tail_mass(w));

    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    auto& row = rows[r];
    row.reserve(touched.size());
    for (std::size_t k : touched) row.emplace_back(k, dense[k]);
  });

  row_start_.reserve(n + 1);
  row_start_.push_back(0);
  for (const auto& row : rows) {
    for (const auto& [k, wgt] : row) {
      col_.push_back(k);
      weight_.push_back(wgt);
    }
    row_start_.push_back(col_.size());
  }
  for (double w : nodes_) max_tail_mass_ = std::max(max_tail_mass_, tail_mass(w));
}

std::vector<double> TransitionOperator::default_nodes(std::size_t n) {
  const auto& c = constants();
  return insert_breakpoint(uniform_nodes(0.0, c.G, n), c.g2, true);
}

double TransitionOperator::tail_mass(double w) const {
  const double J = static_cast<double>(i_max_ + 2);
  return tail_raw(w, 1, J) + tail_raw(w, -1, J);
}

GridFunction TransitionOperator::zero() const {
  return GridFunction(nodes_, std::vector<double>(nodes_.size(), 0.0));
}

void TransitionOperator::check_tail(const GridFunction& f) const {
  const double sup = sup_norm(f);
  if (sup == 0.0) return;
  const double u_max = 1.0 / (static_cast<double>(i_max_ + 2) - constants().g2);
  double lo = f(0.0), hi = lo;
  for (double v : {f(u_max)}) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const auto nodes = f.nodes();
  const auto values = f.values();
  for (std::size_t k = 0; k < nodes.size() && nodes[k] <= u_max; ++k) {
    lo = std::min(lo, values[k]);
    hi = std::max(hi, values[k]);
  }
  const double bound = max_tail_mass_ * (hi - lo);
  if (bound > tail_tol_ * sup) {
    const double scale = bound / (tail_tol_ * sup);
    long need = static_cast<long>(std::ceil(static_cast<double>(i_max_) * scale));
    if (need % 2 == 0) ++need;
    throw NumericalError("series tail above tolerance for i_max = " + std::to_string(i_max_),
                         bound, need);
  }
}

GridFunction TransitionOperator::apply(const GridFunction& f) const {
  if (f.size() != nodes_.size() || f.lo() != nodes_.front() || f.hi() != nodes_.back() ||
      f.interp() != Interp::linear) {
    throw ValidationError("grid function does not live on the operator nodes");
  }
  check_tail(f);
  const auto values = f.values();
  std::vector<double> out(nodes_.size());
  for (std::size_t r = 0; r < nodes_.size(); ++r) {
    double acc = 0.0;
    for (std::size_t j = row_start_[r]; j < row_start_[r + 1]; ++j) {
      acc += weight_[j] * values[col_[j]];
    }
    out[r] = acc;
  }
  return f.with_values(std::move(out));
}

double TransitionOperator::apply_at(double w, const GridFunction& f) const {
  require_state(w);
  return apply_exact(w, [&f](double u) { return f(u); });
}

GridFunction indicator_image(const TransitionOperator& op, double y) {
  return op.sample([y](double w) { return transition_mass(w, y); });
}

double n_step_Q(const TransitionOperator& op, double s0, double y, int n) {
  if (n < 1) throw ValidationError("n_step_Q needs n >= 1");
  require_state(s0);
  if (n == 1) return transition_mass(s0, y);
  GridFunction g = indicator_image(op, y);
  for (int k = 2; k < n; ++k) g = op.apply(g);
  return op.apply_at(s0, g);
}

double stationarity_residual(const Interval& b) {
  const auto& c = constants();
  require_state(b.lo);
  require_state(b.hi);
  if (b.lo > b.hi) throw DomainError("interval with lo > hi");

  // Q(w, B) jumps where some image u(w, pair) crosses an endpoint of B.
  std::vector<double> cuts = {0.0, c.g2, c.G};
  for (double y : {b.lo, b.hi}) {
    if (y <= 0.0) continue;
    for (long i = 1; i <= static_cast<long>(1.0 / y) + 2; i += 2) {
      const double di = static_cast<double>(i);
      const double plus = 1.0 / y - di;
      if (plus > 0.0 && plus < c.G) cuts.push_back(plus);
      const double minus = di - 1.0 / y;
      if (minus > 0.0 && minus < c.g2) cuts.push_back(minus);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  // Cuts that agree up to rounding are the same jump.
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return y - x <= 1e-13; }),
             cuts.end());
  cuts.back() = c.G;

  auto integrand = [&b](double w) {
    return (transition_mass(w, b.hi) - transition_mass(w, b.lo)) * xi_density(w);
  };
  double lhs = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    lhs += integrate(integrand, cuts[k], cuts[k + 1]).value;
  }
  return std::abs(lhs - (xi_cdf(b.hi) - xi_cdf(b.lo)));
}

VariationReport check_prop1(const TransitionOperator& op, const GridFunction& f, double slack) {
  const auto& c = constants();
  VariationReport rep;
  rep.var_f = variation(f);
  rep.sup_f = sup_norm(f);
  rep.var_Uf = variation(op.apply(f));
  rep.bound = c.theta1 * rep.var_f + c.theta2 * rep.sup_f;
  rep.satisfied = rep.var_Uf <= rep.bound + slack;
  return rep;
}

VariationReport check_prop1_indicator(const TransitionOperator& op, double y, double slack) {
  const auto& c = constants();
  require_state(y);
  VariationReport rep;
  rep.var_f = (y < c.G) ? 1.0 : 0.0;
  rep.sup_f = 1.0;
  rep.var_Uf = variation(indicator_image(op, y));
  rep.bound = c.theta1 * rep.var_f + c.theta2 * rep.sup_f;
  rep.satisfied = rep.var_Uf <= rep.bound + slack;
  return rep;
}

GridFunction random_bv_function(const TransitionOperator& op, std::uint64_t seed,
                                std::uint64_t index) {
  const auto& c = constants();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::uniform_real_distribution<double> where(0.0, c.G);
  const int jumps = std::uniform_int_distribution<int>(1, 9)(gen);

  std::vector<double> knots = {0.0};
  for (int k = 0; k < jumps; ++k) knots.push_back(where(gen));
  std::sort(knots.begin(), knots.end());
  knots.push_back(c.G);
  // Piece k runs linearly from start[k] to end[k] on [knots[k], knots[k+1]).
  std::vector<double> start(knots.size() - 1), end(knots.size() - 1);
  for (std::size_t k = 0; k < start.size(); ++k) {
    start[k] = value(gen);
    end[k] = value(gen);
  }
  return op.sample([&](double w) {
    const auto it = std::upper_bound(knots.begin(), knots.end() - 1, w);
    const std::size_t k = std::min<std::size_t>(it - knots.begin() - 1, start.size() - 1);
    const double s = (w - knots[k]) / (knots[k + 1] - knots[k]);
    return start[k] + s * (end[k] - start[k]);
  });
}

std::vector<double> rowsum_states() { return uniform_nodes(0.0, constants().G, 101); }

std::vector<Interval> stationarity_suite() {
  const auto& c = constants();
  return {{0.0, 0.2},  {0.1, 0.5},    {0.3, 0.38}, {0.38, 0.39}, {0.5, 1.0},
          {1.0, c.G},  {0.0, c.g2},   {c.g2, c.G}, {0.05, 1.5},  {0.0, c.G}};
}

namespace {

// values[n-1][j] = (U^n h_j)(s0) for n = 1..n_max, with the first application
// done by `first` and later ones on the grid.
template <class First>
std::vector<double> operator_chain(const TransitionOperator& op, double s0, int n_max,
                                   const GridFunction& start, First&& first) {
  std::vector<double> out;
  out.reserve(n_max);
  out.push_back(first(s0));
  GridFunction g = start;
  for (int n = 2; n <= n_max; ++n) {
    out.push_back(op.apply_at(s0, g));
    if (n < n_max) g = op.apply(g);
  }
  return out;
}

struct ChainValues {
  // [case][s0][n-1]
  std::vector<std::vector<std::vector<double>>> G;
  std::vector<std::vector<std::vector<double>>> F;
};

ChainValues run_chains(const TransitionOperator& op, const TheoremGConfig& cfg,
                       const std::vector<std::pair<double, int>>& f_cases) {
  ChainValues out;
  out.G.resize(cfg.y_nodes.size());
  parallel_for(cfg.y_nodes.size(), [&](std::size_t j) {
    const double y = cfg.y_nodes[j];
    const GridFunction g1 = indicator_image(op, y);
    for (double s0 : cfg.s0) {
      out.G[j].push_back(operator_chain(op, s0, cfg.n_max, g1,
                                        [y](double s) { return transition_mass(s, y); }));
    }
  });
  out.F.resize(f_cases.size());
  parallel_for(f_cases.size(), [&](std::size_t j) {
    const auto [x, e] = f_cases[j];
    auto kernel = [x = x, e = e](double s) { return f0_conditional(x, e, s); };
    const GridFunction phi = op.sample(kernel);
    const GridFunction u_phi = op.apply(phi);
    for (double s0 : cfg.s0) {
      out.F[j].push_back(operator_chain(op, s0, cfg.n_max, u_phi, [&](double s) {
        return op.apply_exact(s, kernel);
      }));
    }
  });
  return out;
}

}  // namespace

ConvergenceReport theorem_thG_check(const TransitionOperator& fine,
                                    const TransitionOperator& coarse,
                                    const TheoremGConfig& config) {
  const auto& c = constants();
  TheoremGConfig cfg = config;
  if (cfg.n_max < 1) throw ValidationError("n_max must be >= 1");
  if (cfg.y_nodes.empty()) cfg.y_nodes = uniform_nodes(0.0, c.G, 21);
  if (cfg.x_nodes.empty()) {
    for (int k = 1; k <= 10; ++k) cfg.x_nodes.push_back(k / 10.0);
  }
  if (!cfg.include_F) cfg.x_nodes.clear();

  std::vector<std::pair<double, int>> f_cases;
  std::vector<double> f_limit;
  for (double x : cfg.x_nodes) {
    for (int e : {1, -1}) {
      f_cases.emplace_back(x, e);
      f_limit.push_back(limit_F(x, e));
    }
  }

  const ChainValues vf = run_chains(fine, cfg, f_cases);
  const ChainValues vc = run_chains(coarse, cfg, f_cases);

  ConvergenceReport report;
  std::vector<int> fit_n;
  std::vector<double> fit_err;
  for (int n = 1; n <= cfg.n_max; ++n) {
    ConvergenceRow row;
    row.n = n;
    row.bound = std::pow(c.theta, n);
    for (std::size_t j = 0; j < cfg.y_nodes.size(); ++j) {
      const double target = xi_cdf(cfg.y_nodes[j]);
      for (std::size_t s = 0; s < cfg.s0.size(); ++s) {
        const double v = vf.G[j][s][n - 1];
        row.error = std::max(row.error, std::abs(v - target));
        row.slack = std::max(row.slack, std::abs(v - vc.G[j][s][n - 1]));
      }
    }
    for (std::size_t j = 0; j < f_cases.size(); ++j) {
      for (std::size_t s = 0; s < cfg.s0.size(); ++s) {
        const double v = vf.F[j][s][n - 1];
        row.aux = std::max(row.aux, std::abs(v - f_limit[j]));
        row.slack = std::max(row.slack, std::abs(v - vc.F[j][s][n - 1]));
      }
    }
    if (!report.rows.empty() && report.rows.back().error > 0.0) {
      row.ratio = row.error / report.rows.back().error;
    }
    row.trustworthy = row.slack <= row.bound / 10.0;
    if (!row.trustworthy) {
      row.verdict = Verdict::inconclusive;
    } else {
      const bool ok = row.error <= row.bound + row.slack && row.aux <= row.bound + row.slack;
      row.verdict = ok ? Verdict::pass : Verdict::fail;
      report.last_trustworthy_n = n;
      // Errors at the level of the discretization carry no rate information.
      if (row.error > 10.0 * row.slack) {
        fit_n.push_back(n);
        fit_err.push_back(row.error);
      }
    }
    report.rows.push_back(row);
  }
  if (fit_n.size() >= 4) {
    report.fitted_rate = rate_fit(fit_n, fit_err);
  } else {
    report.notes.push_back("fewer than four errors above the discretization level; no rate fit");
  }
  return report;
}

}  // namespace ocf
