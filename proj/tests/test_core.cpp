#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "ocf/core.hpp"
#include "ocf/errors.hpp"
#include "ocf/rational.hpp"

using namespace ocf;

namespace {

Rational R(long p, long q) { return make_rational(p, q); }

std::vector<Digit> digits_of(std::initializer_list<std::pair<long, int>> list) {
  std::vector<Digit> out;
  for (auto [a, e] : list) out.push_back(Digit::make(a, e));
  return out;
}

// T(x) from the two branch families, written out independently of ocf_step:
// x in (1/(2k), 1/(2k-1)] -> 1/x - (2k-1); x in (1/(2k-1), 1/(2k-2)] -> (2k-1) - 1/x.
Rational branch_oracle(const Rational& x) {
  if (x == 0) return 0;
  const Rational inv = 1 / x;
  for (long k = 1;; ++k) {
    const Rational lo1 = R(1, 2 * k), hi1 = R(1, 2 * k - 1);
    if (x > lo1 && x <= hi1) return inv - (2 * k - 1);
    if (k >= 2) {
      const Rational hi2 = R(1, 2 * k - 2);
      if (x > hi1 && x <= hi2) return (2 * k - 1) - inv;
    }
  }
}

// All reduced p/q in (0, 1] with q <= qmax.
std::vector<Rational> reduced_rationals(long qmax) {
  std::vector<Rational> out;
  for (long q = 1; q <= qmax; ++q) {
    for (long p = 1; p <= q; ++p) {
      if (std::gcd(p, q) == 1) out.push_back(R(p, q));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("digit admissibility") {
  CHECK(Digit::admissible(1, 1));
  CHECK_FALSE(Digit::admissible(1, -1));
  CHECK(Digit::admissible(3, -1));
  CHECK_FALSE(Digit::admissible(2, 1));
  CHECK_FALSE(Digit::admissible(-1, 1));
  CHECK_FALSE(Digit::admissible(3, 0));
  CHECK_THROWS_AS(Digit::make(1, -1), ValidationError);
}

TEST_CASE("rational helpers") {
  CHECK(parse_rational("2/5") == R(2, 5));
  CHECK(parse_rational("4/10") == R(2, 5));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS(parse_rational("x/2"));
  CHECK(floor(R(-1, 2)) == -1);
  CHECK(floor(R(7, 2)) == 3);
  CHECK(compare_to_G(R(8, 5)) == std::strong_ordering::less);
  CHECK(compare_to_G(R(13, 8)) == std::strong_ordering::greater);
  CHECK(compare_to_g2(R(2, 5)) == std::strong_ordering::greater);
  CHECK(compare_to_g2(R(3, 8)) == std::strong_ordering::less);
  CHECK(compare_to_g2(R(-1, 1)) == std::strong_ordering::less);
  CHECK(compare_to_g2(R(3, 1)) == std::strong_ordering::greater);
}

TEST_CASE("odd Gauss map examples") {
  CHECK(odd_gauss_map(0) == 0);
  CHECK(odd_gauss_map(R(2, 5)) == R(1, 2));
  CHECK(odd_gauss_map(R(3, 4)) == R(1, 3));
  CHECK(odd_gauss_map(1) == 0);
  CHECK(odd_gauss_map(R(1, 2)) == 1);  // x = 1/2 lies in (1/3, 1/2]
  CHECK(odd_gauss_map(R(1, 3)) == 0);  // x = 1/3 lies in the first family
  CHECK_THROWS_AS(odd_gauss_map(R(3, 2)), DomainError);
  CHECK_THROWS_AS(odd_gauss_map(R(-1, 2)), DomainError);
}

TEST_CASE("odd Gauss map agrees with the branch families") {
  for (const auto& x : reduced_rationals(60)) {
    const Rational t = odd_gauss_map(x);
    CHECK(t == branch_oracle(x));
    CHECK(t.get_den() == Rational(t).get_den());  // canonical
    CHECK(sgn(t) >= 0);
    CHECK(t <= 1);
  }
}

TEST_CASE("first digit examples") {
  CHECK(*first_digit(R(3, 4)) == Digit{1, 1});
  CHECK(*first_digit(R(2, 5)) == Digit{3, -1});
  CHECK(*first_digit(R(1, 3)) == Digit{3, 1});
  CHECK_FALSE(first_digit(0).has_value());
  for (const auto& x : reduced_rationals(40)) {
    const Digit d = *first_digit(x);
    CHECK(Digit::admissible(d.a, d.eps));
    CHECK(x == 1 / (Rational(d.a) + d.eps * odd_gauss_map(x)));
  }
}

TEST_CASE("expand and evaluate examples") {
  const auto ex = expand(R(2, 5));
  CHECK(ex.terminated);
  CHECK(ex.digits == digits_of({{3, -1}, {3, -1}, {1, 1}}));
  CHECK(expand(R(1, 3)).digits == digits_of({{3, 1}}));
  CHECK(expand(1).digits == digits_of({{1, 1}}));
  CHECK(expand(0).digits.empty());
  CHECK(expand(0).terminated);

  CHECK(evaluate(digits_of({{3, -1}, {3, -1}, {1, 1}})) == R(2, 5));
  CHECK(evaluate(digits_of({{1, 1}})) == 1);
  CHECK(evaluate(digits_of({{3, 1}})) == R(1, 3));

  const auto partial = expand(R(2, 5), 2);
  CHECK(partial.digits.size() == 2);
  CHECK_FALSE(partial.terminated);
}

TEST_CASE("evaluate rejects bad input") {
  CHECK_THROWS_AS(evaluate({}), ValidationError);
  std::vector<Digit> bad = {Digit{1, -1}};
  CHECK_THROWS_AS(evaluate(bad), ValidationError);
  std::vector<Digit> even = {Digit{2, 1}};
  CHECK_THROWS_AS(evaluate(even), ValidationError);
}

TEST_CASE("convergents of 2/5") {
  const auto rows = convergents(expand(R(2, 5)).digits);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].n == -1);
  CHECK(rows[0].p == 1);
  CHECK(rows[0].q == 0);
  CHECK(rows[1].p == 0);
  CHECK(rows[1].q == 1);
  CHECK(rows[2].p == 1);
  CHECK(rows[2].q == 3);
  CHECK(rows[3].p == 3);
  CHECK(rows[3].q == 8);
  CHECK(rows[4].p == 2);
  CHECK(rows[4].q == 5);
  CHECK(rows[3].delta == -1);  // 1*8 - 3*3

  const auto empty = convergents({});
  REQUIRE(empty.size() == 2);
  CHECK(empty[0].p == 1);
  CHECK(empty[1].q == 1);
}

TEST_CASE("s sequence of 2/5") {
  const auto d = expand(R(2, 5)).digits;
  const auto s = s_sequence(d);
  REQUIRE(s.size() == 4);
  CHECK(s[0] == 0);
  CHECK(s[1] == R(1, 3));
  CHECK(s[2] == R(3, 8));
  CHECK(s[3] == R(8, 5));
}

TEST_CASE("r tail and reconstruction of 2/5") {
  const Rational x = R(2, 5);
  CHECK(r_tail(x, 1) == R(5, 2));
  CHECK(r_tail(x, 2) == 2);
  CHECK(r_tail(x, 1) == 3 - 1 / r_tail(x, 2));
  CHECK(r_tail(x, 3) == 1);  // terminated tail: r_n = a_n
  CHECK_THROWS_AS(r_tail(x, 4), ValidationError);
  CHECK_THROWS_AS(r_tail(x, 0), ValidationError);

  const auto rows = convergents(expand(x).digits);
  CHECK(reconstruct(rows[2], rows[3], 1, -1) == x);
  CHECK(signed_tail(rows[2], rows[3], x) == -1);
  CHECK(reconstruct(rows[0], rows[1], x, 1) == x);
}

TEST_CASE("identities over all reduced rationals with small denominators") {
  for (const auto& x : reduced_rationals(80)) {
    const Expansion ex = expand(x);
    REQUIRE(ex.terminated);
    CHECK(evaluate(ex.digits) == x);
    const auto rows = convergents(ex.digits);
    const auto s = s_sequence(ex.digits);
    const std::size_t N = ex.digits.size();
    CHECK(make_rational(rows.back().p, rows.back().q) == x);

    std::vector<Rational> orbit = {x};
    for (std::size_t k = 0; k < N; ++k) orbit.push_back(odd_gauss_map(orbit.back()));

    for (std::size_t n = 1; n <= N; ++n) {
      const auto& prev = rows[n];
      const auto& cur = rows[n + 1];
      const Digit& d = ex.digits[n - 1];
      // Determinant sign (-1)^n e_0 ... e_{n-1}.
      CHECK(cur.delta == alternating_sign_product(ex.digits, n));
      // s_n = q_{n-1}/q_n.
      CHECK(s[n] == make_rational(prev.q, cur.q));
      // a_n - 2 + G < q_n/q_{n-1} < a_n + G, i.e. -g^2 < q_n/q_{n-1} - a_n < G.
      const Rational excess = make_rational(cur.q, prev.q) - d.a;
      CHECK(compare_to_G(excess) == std::strong_ordering::less);
      CHECK(compare_to_g2(-excess) == std::strong_ordering::less);
      // a_n >= 3 <=> s_n < g^2, a_n = 1 <=> g^2 < s_n < G.
      if (d.a >= 3) {
        CHECK(sgn(s[n]) > 0);
        CHECK(compare_to_g2(s[n]) == std::strong_ordering::less);
      } else {
        CHECK(compare_to_g2(s[n]) == std::strong_ordering::greater);
        CHECK(compare_to_G(s[n]) == std::strong_ordering::less);
      }
      // Reconstruction from t_n = T^n(x) and its inverse.
      const int eps_n = d.eps;
      CHECK(reconstruct(prev, cur, orbit[n], eps_n) == x);
      if (n < N) {
        const Rational st = signed_tail(prev, cur, x);
        CHECK(st == eps_n * orbit[n]);
        CHECK(sgn(st) != 0);
        // A finite expansion ends with T^{N-1}(x) = 1/a_N, which may be 1.
        if (n + 1 < N) {
          CHECK(abs(st) < 1);
        } else {
          CHECK(st == Rational(eps_n) / ex.digits.back().a);
        }
        // Shift: the digits of T^n(x) are the n-shifted digits of x.
        const auto shifted = expand(orbit[n]).digits;
        CHECK(std::equal(shifted.begin(), shifted.end(), ex.digits.begin() + n,
                         ex.digits.end()));
        // T^n(x) = 1/r_{n+1}.
        CHECK(orbit[n] == 1 / r_tail(x, n + 1));
      }
    }
  }
}

TEST_CASE("expansion of a large rational stays exact") {
  const Integer p("123456789012345678901234567890");
  const Integer q("987654321098765432109876543211");
  const Rational x = make_rational(p, q);
  const Expansion ex = expand(x);
  CHECK(ex.terminated);
  CHECK(evaluate(ex.digits) == x);
}

TEST_CASE("max digits caps the expansion") {
  const Rational x = make_rational(Integer("832040"), Integer("1346269"));
  const auto ex = expand(x, 3);
  CHECK(ex.digits.size() == 3);
  CHECK_FALSE(ex.terminated);
}
