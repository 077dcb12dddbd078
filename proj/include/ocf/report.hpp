#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ocf {

enum class Verdict { pass, fail, inconclusive };

const char* to_string(Verdict v);

/// One iteration of a convergence driver. `error` is the primary error
/// measure, `aux` a secondary one (M_n for the Szusz iteration, the F_n
/// error for the operator check), `ratio` the ratio of consecutive primary
/// (or aux) values, `bound` the value it is tested against.
struct ConvergenceRow {
  int n = 0;
  double error = 0.0;
  double aux = 0.0;
  std::optional<double> ratio;
  double bound = 0.0;
  double slack = 0.0;
  bool trustworthy = true;
  Verdict verdict = Verdict::pass;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// Largest n whose row is numerically trustworthy, if any.
  std::optional<int> last_trustworthy_n;
  std::optional<double> fitted_rate;
  std::vector<std::string> notes;

  bool all_pass() const;
};

/// Least-squares geometric rate of a per-n error sequence: exp of the slope
/// of log(error) against n. Non-positive or non-finite entries are dropped;
/// throws NumericalError when fewer than four points remain.
double rate_fit(const std::vector<int>& n, const std::vector<double>& errors);

}  // namespace ocf
