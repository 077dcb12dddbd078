#include "ocf/core.hpp"

#include <string>

#include "ocf/errors.hpp"

namespace ocf {

namespace {

void require_unit_interval(const Rational& x) {
  if (sgn(x) < 0 || x > 1) throw DomainError("x = " + to_string(x) + " is outside [0, 1]");
}

}  // namespace

bool Digit::admissible(const Integer& a, int eps) {
  if (eps != 1 && eps != -1) return false;
  if (sgn(a) <= 0 || mpz_even_p(a.get_mpz_t())) return false;
  return a + eps > 1;
}

Digit Digit::make(const Integer& a, int eps) {
  if (!admissible(a, eps)) {
    throw ValidationError("inadmissible digit (a=" + a.get_str() + ", eps=" + std::to_string(eps) +
                          ")");
  }
  return Digit{a, eps};
}

std::optional<OcfStep> ocf_step(const Rational& x) {
  require_unit_interval(x);
  if (sgn(x) == 0) return std::nullopt;

  // 1/x = q/p = m + r/p. The branch of T is decided by the parity of m:
  // x in (1/(2k), 1/(2k-1)] has m = 2k-1 and x in (1/(2k-1), 1/(2k-2)] has
  // m = 2k-2, both intervals left-open and right-closed.
  const Integer& p = x.get_num();
  const Integer& q = x.get_den();
  Integer m, r;
  mpz_fdiv_qr(m.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());

  // gcd(r, p) = gcd(q, p) = 1, so the images are reduced unless r = 0.
  OcfStep step;
  if (mpz_odd_p(m.get_mpz_t())) {
    step.digit = Digit{m, 1};
    step.next = Rational(r, p);
  } else {
    step.digit = Digit{m + 1, -1};
    step.next = Rational(Integer(p - r), p);
  }
  if (r == 0) step.next.canonicalize();  // x = 1/m: image is 0 or 1
  return step;
}

Rational odd_gauss_map(const Rational& x) {
  auto step = ocf_step(x);
  return step ? step->next : Rational(0);
}

std::optional<Digit> first_digit(const Rational& x) {
  auto step = ocf_step(x);
  if (!step) return std::nullopt;
  return step->digit;
}

Expansion expand(const Rational& x, std::size_t max_digits) {
  require_unit_interval(x);
  Expansion out;
  Rational t = x;
  while (out.digits.size() < max_digits) {
    auto step = ocf_step(t);
    if (!step) {
      out.terminated = true;
      return out;
    }
    out.digits.push_back(std::move(step->digit));
    t = std::move(step->next);
  }
  out.terminated = sgn(t) == 0;
  return out;
}

Rational evaluate(std::span<const Digit> digits) {
  if (digits.empty()) throw ValidationError("cannot evaluate an empty digit sequence");
  for (const auto& d : digits) Digit::make(d.a, d.eps);

  Rational value(1, 1);
  value /= Rational(digits.back().a);
  for (std::size_t k = digits.size() - 1; k-- > 0;) {
    Rational denom = Rational(digits[k].a) + digits[k].eps * value;
    if (sgn(denom) == 0) {
      throw ZeroDenominatorError("zero denominator at digit " + std::to_string(k + 1), k + 1);
    }
    value = 1 / denom;
  }
  return value;
}

std::vector<ConvergentRow> convergents(std::span<const Digit> digits) {
  for (const auto& d : digits) Digit::make(d.a, d.eps);

  std::vector<ConvergentRow> rows;
  rows.reserve(digits.size() + 2);
  rows.push_back({-1, 1, 0, 0});
  rows.push_back({0, 0, 1, 1});
  int prev_eps = 1;  // e_0
  for (std::size_t k = 0; k < digits.size(); ++k) {
    const ConvergentRow& r1 = rows[rows.size() - 1];
    const ConvergentRow& r2 = rows[rows.size() - 2];
    ConvergentRow row;
    row.n = static_cast<long>(k) + 1;
    row.p = digits[k].a * r1.p + prev_eps * r2.p;
    row.q = digits[k].a * r1.q + prev_eps * r2.q;
    const Integer delta = r1.p * row.q - row.p * r1.q;
    if (delta != 1 && delta != -1) {
      throw ValidationError("convergent determinant is not a unit at n = " +
                            std::to_string(row.n));
    }
    row.delta = static_cast<int>(delta.get_si());
    rows.push_back(std::move(row));
    prev_eps = digits[k].eps;
  }
  return rows;
}

int alternating_sign_product(std::span<const Digit> digits, std::size_t n) {
  if (n > digits.size()) throw ValidationError("sign product index beyond the digit string");
  int sign = (n % 2 == 0) ? 1 : -1;
  for (std::size_t i = 1; i < n; ++i) sign *= digits[i - 1].eps;  // e_0 = +1
  return sign;
}

std::vector<Rational> s_sequence(std::span<const Digit> digits) {
  for (const auto& d : digits) Digit::make(d.a, d.eps);
  std::vector<Rational> s;
  s.reserve(digits.size() + 1);
  s.emplace_back(0);
  for (std::size_t n = 1; n <= digits.size(); ++n) {
    const Rational& prev = s.back();
    Rational denom = Rational(digits[n - 1].a);
    if (n >= 2) denom += digits[n - 2].eps * prev;
    s.push_back(1 / denom);
  }
  return s;
}

Rational r_tail(const Rational& x, std::size_t n) {
  if (n == 0) throw ValidationError("r_n is defined for n >= 1");
  Rational t = x;
  std::optional<Digit> digit;
  for (std::size_t k = 0; k < n; ++k) {
    auto step = ocf_step(t);
    if (!step) {
      throw ValidationError("index " + std::to_string(n) + " lies beyond the termination of x = " +
                            to_string(x));
    }
    digit = std::move(step->digit);
    t = std::move(step->next);
  }
  return Rational(digit->a) + digit->eps * t;
}

Rational reconstruct(const ConvergentRow& prev, const ConvergentRow& cur, const Rational& t,
                     int eps_n) {
  const Rational num = Rational(cur.p) + Rational(prev.p) * eps_n * t;
  const Rational den = Rational(cur.q) + Rational(prev.q) * eps_n * t;
  if (sgn(den) == 0) throw ValidationError("zero denominator in reconstruction");
  return num / den;
}

Rational signed_tail(const ConvergentRow& prev, const ConvergentRow& cur, const Rational& x) {
  const Rational num = Rational(cur.q) * x - Rational(cur.p);
  const Rational den = Rational(prev.p) - Rational(prev.q) * x;
  if (sgn(den) == 0) throw ValidationError("zero denominator in signed tail");
  return num / den;
}

}  // namespace ocf
