#pragma once

// Monte Carlo orbits of the odd Gauss map from Lebesgue-distributed starting
// points. Every starting point is the dyadic rational k / 2^64, so orbits are
// computed in exact integer arithmetic; floating point enters only when the
// empirical laws are compared with their limits.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ocf/core.hpp"
#include "ocf/rational.hpp"
#include "ocf/report.hpp"

namespace ocf {

struct OrbitStep {
  Rational t;   // T^n(x0)
  Digit digit;  // (a_n, e_n), read off T^{n-1}(x0)
  Rational s;   // q_{n-1} / q_n
};

struct OrbitSample {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  Rational x0;
  std::vector<OrbitStep> trajectory;  // rows n = 1 .. steps
  bool terminated = false;            // T^n(x0) = 0 for some n <= steps
};

/// Numerator k of the starting point k / 2^64 of sample `index`, from a
/// generator seeded by (seed, index) alone.
std::uint64_t starting_numerator(std::uint64_t seed, std::uint64_t index);
Rational starting_point(std::uint64_t seed, std::uint64_t index);

/// Full exact trajectories. Intended for modest sample counts; the
/// statistics driver below streams large runs.
std::vector<OrbitSample> sample_orbits(std::uint64_t seed, std::size_t samples, int steps);

enum class KsReference { uniform, limit_H, xi, first_digit_law };

const char* to_string(KsReference r);

struct KsResult {
  double statistic = 0.0;
  std::size_t sample_count = 0;
  KsReference reference = KsReference::uniform;
};

/// sup |F_N - F| for a sorted sample. `left` is the left limit of F and
/// defaults to F itself (continuous reference).
double ks_statistic(const std::vector<double>& sorted, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& left = {});

/// Law of s_1 = 1/a_1 under Lebesgue measure: P(a_1 = 1) = 1/2 and
/// P(a_1 = 2k - 1) = 1/(2k - 2) - 1/(2k) for k >= 2.
double first_digit_law_cdf(double v);
double first_digit_law_left(double v);

/// Per-n columns of T^n(x0) and s_n in sample order. An orbit that reaches
/// 0 at step m has no entries from m on; column n holds only the orbits
/// still running at n.
struct OrbitColumns {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  int steps = 0;
  std::vector<std::uint64_t> numerators;       // k of x0 = k / 2^64, every sample
  std::vector<std::vector<double>> t;          // t[n][.], n = 0..steps
  std::vector<std::vector<double>> s;          // s[n][.], n = 0..steps
  std::vector<std::size_t> terminated_by;      // orbits with T^m(x0) = 0, m <= n
};

OrbitColumns simulate_columns(std::uint64_t seed, std::size_t samples, int steps);

/// KS statistic of the empirical law of T^n(x0) against limit_H (against
/// the uniform law when reference_uniform is set).
KsResult empirical_Hn(const OrbitColumns& data, int n, bool reference_uniform = false);

/// KS statistic of the empirical law of s_n against xi (n >= 1), or against
/// the exact law of 1/a_1 when n = 1 and exact_first is set.
KsResult empirical_s_law(const OrbitColumns& data, int n, bool exact_first = false);

/// Fraction of samples with 1/x0 > t, compared exactly.
double fraction_r1_exceeds(const OrbitColumns& data, const Rational& t);

/// Fraction of the orbits running at n with s_n >= g^2.
double fraction_in_w2(const OrbitColumns& data, int n);

struct SimulationRow {
  int n = 0;
  double ks_vs_limit_H = 0.0;
  std::optional<double> ks_s_vs_xi;  // absent for n = 0
  std::size_t terminated_count = 0;
  std::optional<double> gate_H;      // bound applied to ks_vs_limit_H
  std::optional<double> gate_s;      // bound applied to ks_s_vs_xi
  /// Inconclusive once some orbit has terminated: the starting points then
  /// no longer resolve the law of T^n(x0).
  Verdict verdict = Verdict::pass;
};

struct SimulationReport {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t running_at_end = 0;  // orbits not terminated within steps
  int steps = 0;
  std::vector<SimulationRow> rows;
  double ks_x0_vs_uniform = 0.0;
  std::optional<double> ks_s1_vs_first_digit_law;
  double lambda_r1_gt_2 = 0.0;
  std::optional<double> w2_fraction;  // s_12 in [g^2, G], when steps >= 12
  std::optional<double> w2_target;
  /// Gates on the summary statistics that failed, by name.
  std::vector<std::string> failed_gates;

  bool all_pass() const;
};

/// Gates, in multiples of 1/sqrt(N): x0 uniform within 2, s_1 against the
/// law of 1/a_1 within 2, T^n law within 5 for n >= 10, s_n law within
/// 0.01 + 5 for n >= 12, lambda(r_1 > 2) within 3 of 1/2, and the mass of
/// s_12 on [g^2, G] within 0.005 + 3 of its limit. Per-n gates apply only
/// while no orbit has terminated.
SimulationReport simulate(std::uint64_t seed, std::size_t samples, int steps);

}  // namespace ocf
