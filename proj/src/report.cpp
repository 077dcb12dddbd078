#include "ocf/report.hpp"

#include <cmath>

#include "ocf/errors.hpp"

namespace ocf {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

bool ConvergenceReport::all_pass() const {
  for (const auto& row : rows) {
    if (row.verdict == Verdict::fail) return false;
  }
  return true;
}

double rate_fit(const std::vector<int>& n, const std::vector<double>& errors) {
  if (n.size() != errors.size()) throw ValidationError("rate_fit: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (!(errors[k] > 0.0) || !std::isfinite(errors[k])) continue;
    const double x = n[k];
    const double y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 4) throw NumericalError("rate_fit needs at least four positive errors", m);
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return std::exp(slope);
}

}  // namespace ocf
