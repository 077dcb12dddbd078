#include "ocf/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ocf/constants.hpp"
#include "ocf/errors.hpp"
#include "ocf/measures.hpp"
#include "ocf/parallel.hpp"

namespace ocf {

namespace {

const Integer& two_to_64() {
  static const Integer v = Integer(1) << 64;
  return v;
}

Integer to_integer(std::uint64_t k) {
  Integer z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(k), 0, 0, &k);
  return z;
}

void require_counts(std::size_t samples, int steps) {
  if (samples == 0) throw ValidationError("samples must be positive");
  if (steps < 0) throw ValidationError("steps must be >= 0");
}

void require_step(const OrbitColumns& data, int n, int lowest) {
  if (n < lowest || n > data.steps) {
    throw ValidationError("n = " + std::to_string(n) + " outside the computed steps");
  }
  if (data.t[n].empty()) throw NumericalError("every orbit terminated by step " + std::to_string(n), 0.0);
}

std::vector<double> sorted_copy(const std::vector<double>& v) {
  std::vector<double> out = v;
  std::sort(out.begin(), out.end());
  return out;
}

// 1/v rounded to an integer when it is one up to rounding of v = 1/a.
double reciprocal(double v) {
  const double a = 1.0 / v;
  const double r = std::round(a);
  return std::abs(a - r) <= 1e-9 * a ? r : a;
}

}  // namespace

std::uint64_t starting_numerator(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 gen(seq);
  return gen();
}

Rational starting_point(std::uint64_t seed, std::uint64_t index) {
  return make_rational(to_integer(starting_numerator(seed, index)), two_to_64());
}

std::vector<OrbitSample> sample_orbits(std::uint64_t seed, std::size_t samples, int steps) {
  require_counts(samples, steps);
  std::vector<OrbitSample> out(samples);
  parallel_for(samples, [&](std::size_t j) {
    OrbitSample& o = out[j];
    o.seed = seed;
    o.index = j;
    o.x0 = starting_point(seed, j);
    Rational t = o.x0;
    Integer q_prev = 0, q_cur = 1;
    int eps_prev = 1;
    for (int n = 1; n <= steps; ++n) {
      auto step = ocf_step(t);
      if (!step) {
        o.terminated = true;
        break;
      }
      const Integer q_next = step->digit.a * q_cur + eps_prev * q_prev;
      o.trajectory.push_back({step->next, step->digit, make_rational(q_cur, q_next)});
      eps_prev = step->digit.eps;
      q_prev = q_cur;
      q_cur = q_next;
      t = std::move(step->next);
    }
    if (sgn(t) == 0) o.terminated = true;
  });
  return out;
}

const char* to_string(KsReference r) {
  switch (r) {
    case KsReference::uniform:
      return "uniform";
    case KsReference::limit_H:
      return "limit_H";
    case KsReference::xi:
      return "xi";
    case KsReference::first_digit_law:
      return "first_digit_law";
  }
  return "?";
}

double ks_statistic(const std::vector<double>& sorted, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& left) {
  if (sorted.empty()) throw ValidationError("KS statistic of an empty sample");
  const auto& lower = left ? left : cdf;
  const double N = static_cast<double>(sorted.size());
  double d = 0.0;
  // Between distinct sample points the ECDF is flat and F is monotone, so the
  // supremum is attained at a sample point or as its left limit.
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    d = std::max(d, std::abs(static_cast<double>(j) / N - cdf(sorted[i])));
    d = std::max(d, std::abs(static_cast<double>(i) / N - lower(sorted[i])));
    i = j;
  }
  return d;
}

double first_digit_law_cdf(double v) {
  // P(1/a_1 <= v) = P(a_1 >= A) = 1/(A - 1), A the smallest odd integer >= 1/v.
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  const double a = reciprocal(v);
  if (a > 1e15) return v;
  double A = std::ceil(a);
  if (std::fmod(A, 2.0) == 0.0) A += 1.0;
  return 1.0 / (A - 1.0);
}

double first_digit_law_left(double v) {
  // P(1/a_1 < v) = P(a_1 > 1/v).
  if (v <= 0.0) return 0.0;
  if (v > 1.0) return 1.0;
  const double a = reciprocal(v);
  if (a > 1e15) return v;
  double A = std::floor(a) + 1.0;
  if (std::fmod(A, 2.0) == 0.0) A += 1.0;
  return 1.0 / (A - 1.0);
}

OrbitColumns simulate_columns(std::uint64_t seed, std::size_t samples, int steps) {
  require_counts(samples, steps);
  const std::size_t rows = static_cast<std::size_t>(steps) + 1;
  OrbitColumns data;
  data.seed = seed;
  data.samples = samples;
  data.steps = steps;
  data.numerators.resize(samples);
  data.t.assign(rows, std::vector<double>(samples));
  data.s.assign(rows, std::vector<double>(samples));
  std::vector<int> hit_zero(samples, -1);

  parallel_for(samples, [&](std::size_t j) {
    const std::uint64_t k = starting_numerator(seed, j);
    data.numerators[j] = k;
    data.t[0][j] = std::ldexp(static_cast<double>(k), -64);
    data.s[0][j] = 0.0;
    if (k == 0) {
      hit_zero[j] = 0;
      return;
    }
    // t = p/q in lowest terms; the map keeps it reduced except at t = 1/m.
    Integer p = to_integer(k), q = two_to_64();
    const auto twos = mpz_scan1(p.get_mpz_t(), 0);
    p >>= twos;
    q >>= twos;
    Integer m, r, q_prev = 0, q_cur = 1, q_next;
    int eps_prev = 1;
    for (int n = 1; n <= steps; ++n) {
      mpz_fdiv_qr(m.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
      int eps = 1;
      if (mpz_even_p(m.get_mpz_t())) {
        m += 1;
        eps = -1;
      }
      const bool exact_reciprocal = sgn(r) == 0;
      if (eps == 1) {
        q.swap(p);  // q <- p
        p = r;
      } else {
        q.swap(p);
        p = q - r;
      }
      if (exact_reciprocal && sgn(p) != 0) p = q = 1;

      q_next = m * q_cur + eps_prev * q_prev;
      data.s[n][j] = q_cur.get_d() / q_next.get_d();
      q_prev.swap(q_cur);
      q_cur.swap(q_next);
      eps_prev = eps;
      data.t[n][j] = sgn(p) == 0 ? 0.0 : p.get_d() / q.get_d();
      if (sgn(p) == 0) {
        hit_zero[j] = n;
        return;
      }
    }
  });

  data.terminated_by.assign(rows, 0);
  for (int h : hit_zero) {
    if (h >= 0) {
      for (std::size_t n = static_cast<std::size_t>(h); n < rows; ++n) ++data.terminated_by[n];
    }
  }
  // Column n keeps the orbits still running at n, in sample order.
  for (std::size_t n = 0; n < rows; ++n) {
    std::size_t kept = 0;
    for (std::size_t j = 0; j < samples; ++j) {
      if (hit_zero[j] >= 0 && static_cast<std::size_t>(hit_zero[j]) <= n) continue;
      data.t[n][kept] = data.t[n][j];
      data.s[n][kept] = data.s[n][j];
      ++kept;
    }
    data.t[n].resize(kept);
    data.s[n].resize(kept);
    data.t[n].shrink_to_fit();
    data.s[n].shrink_to_fit();
  }
  return data;
}

KsResult empirical_Hn(const OrbitColumns& data, int n, bool reference_uniform) {
  require_step(data, n, 0);
  const auto sample = sorted_copy(data.t[n]);
  KsResult r;
  r.sample_count = sample.size();
  if (reference_uniform) {
    r.reference = KsReference::uniform;
    r.statistic = ks_statistic(sample, [](double x) { return std::clamp(x, 0.0, 1.0); });
  } else {
    r.reference = KsReference::limit_H;
    r.statistic = ks_statistic(sample, [](double x) { return limit_H(std::clamp(x, 0.0, 1.0)); });
  }
  return r;
}

KsResult empirical_s_law(const OrbitColumns& data, int n, bool exact_first) {
  require_step(data, n, 1);
  const auto sample = sorted_copy(data.s[n]);
  KsResult r;
  r.sample_count = sample.size();
  if (exact_first && n == 1) {
    r.reference = KsReference::first_digit_law;
    r.statistic = ks_statistic(sample, first_digit_law_cdf, first_digit_law_left);
  } else {
    const double G = constants().G;
    r.reference = KsReference::xi;
    r.statistic = ks_statistic(sample, [G](double w) { return xi_cdf(std::clamp(w, 0.0, G)); });
  }
  return r;
}

double fraction_r1_exceeds(const OrbitColumns& data, const Rational& t) {
  if (sgn(t) <= 0) throw DomainError("threshold t must be positive");
  // 1/x0 > t  <=>  k t < 2^64.
  const Integer bound = two_to_64() * t.get_den();
  std::size_t count = 0;
  for (std::uint64_t k : data.numerators) {
    if (to_integer(k) * t.get_num() < bound) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(data.numerators.size());
}

double fraction_in_w2(const OrbitColumns& data, int n) {
  require_step(data, n, 1);
  const double g2 = constants().g2;
  const auto& col = data.s[n];
  const auto count = std::count_if(col.begin(), col.end(), [g2](double w) { return w >= g2; });
  return static_cast<double>(count) / static_cast<double>(col.size());
}

bool SimulationReport::all_pass() const {
  if (!failed_gates.empty()) return false;
  return std::none_of(rows.begin(), rows.end(),
                      [](const SimulationRow& r) { return r.verdict == Verdict::fail; });
}

SimulationReport simulate(std::uint64_t seed, std::size_t samples, int steps) {
  const auto& c = constants();
  const OrbitColumns data = simulate_columns(seed, samples, steps);
  SimulationReport rep;
  rep.seed = seed;
  rep.samples = samples;
  rep.steps = steps;
  rep.running_at_end = data.t.back().size();
  auto unit = [&data](int n) { return 1.0 / std::sqrt(static_cast<double>(data.t[n].size())); };

  rep.rows.resize(static_cast<std::size_t>(steps) + 1);
  parallel_for(rep.rows.size(), [&](std::size_t k) {
    const int n = static_cast<int>(k);
    SimulationRow& row = rep.rows[k];
    row.n = n;
    row.terminated_count = data.terminated_by[k];
    row.ks_vs_limit_H = empirical_Hn(data, n).statistic;
    if (n >= 1) row.ks_s_vs_xi = empirical_s_law(data, n).statistic;
    if (n >= 10) row.gate_H = 5.0 * unit(n);
    if (n >= 12) row.gate_s = 0.01 + 5.0 * unit(n);
    if (!row.gate_H) return;
    if (row.terminated_count > 0) {
      row.verdict = Verdict::inconclusive;
      return;
    }
    bool ok = row.ks_vs_limit_H <= *row.gate_H;
    if (row.gate_s) ok = ok && *row.ks_s_vs_xi <= *row.gate_s;
    row.verdict = ok ? Verdict::pass : Verdict::fail;
  });

  rep.ks_x0_vs_uniform = empirical_Hn(data, 0, true).statistic;
  if (rep.ks_x0_vs_uniform > 2.0 * unit(0)) rep.failed_gates.push_back("ks_x0_vs_uniform");
  if (steps >= 1) {
    rep.ks_s1_vs_first_digit_law = empirical_s_law(data, 1, true).statistic;
    if (*rep.ks_s1_vs_first_digit_law > 2.0 * unit(1)) {
      rep.failed_gates.push_back("ks_s1_vs_first_digit_law");
    }
  }
  rep.lambda_r1_gt_2 = fraction_r1_exceeds(data, Rational(2));
  if (std::abs(rep.lambda_r1_gt_2 - 0.5) > 3.0 * unit(0)) rep.failed_gates.push_back("lambda_r1_gt_2");
  if (steps >= 12) {
    rep.w2_fraction = fraction_in_w2(data, 12);
    rep.w2_target = 1.0 - xi_cdf(c.g2);
    if (std::abs(*rep.w2_fraction - *rep.w2_target) > 0.005 + 3.0 * unit(12)) {
      rep.failed_gates.push_back("w2_fraction");
    }
  }
  return rep;
}

}  // namespace ocf
