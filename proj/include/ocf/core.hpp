#pragma once

// Exact arithmetic of the odd continued fraction (OCF) expansion
//
//   x = 1/(a1 + e1/(a2 + e2/(a3 + ...))) = [1/a1, e1/a2, e2/a3, ...]
//
// with odd partial quotients a_n and signs e_n in {-1, +1}, a_n + e_n > 1.
// Everything here works on exact rationals; no floating point is involved.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ocf/rational.hpp"

namespace ocf {

/// One OCF partial-quotient pair (a_n, e_n).
struct Digit {
  Integer a;
  int eps = 1;

  /// Validating constructor: a odd and positive, eps = +-1, a + eps > 1.
  static Digit make(const Integer& a, int eps);
  static bool admissible(const Integer& a, int eps);

  bool operator==(const Digit& other) const { return a == other.a && eps == other.eps; }
};

struct Expansion {
  std::vector<Digit> digits;
  bool terminated = false;  // the orbit hit 0 exactly
};

/// Row n of the convergent recurrences. delta = p_{n-1} q_n - p_n q_{n-1},
/// with delta = 0 stored for the seed row n = -1.
struct ConvergentRow {
  long n = -1;
  Integer p;
  Integer q;
  int delta = 0;
};

/// Digit and image produced by one application of the odd Gauss map.
struct OcfStep {
  Digit digit;
  Rational next;
};

inline constexpr std::size_t kDefaultMaxDigits = 10000;

/// The odd Gauss map T on [0, 1]; T(0) = 0. Throws DomainError outside [0, 1].
Rational odd_gauss_map(const Rational& x);

/// First digit (a1, e1) of x in (0, 1]; std::nullopt for x = 0.
std::optional<Digit> first_digit(const Rational& x);

/// first_digit and odd_gauss_map fused; std::nullopt for x = 0.
std::optional<OcfStep> ocf_step(const Rational& x);

Expansion expand(const Rational& x, std::size_t max_digits = kDefaultMaxDigits);

/// Bottom-up value of the finite continued fraction. The sign of the last
/// digit does not enter the value.
Rational evaluate(std::span<const Digit> digits);

/// Rows n = -1 .. N of the recurrences p_n = a_n p_{n-1} + e_{n-1} p_{n-2}
/// (same for q) with e_0 = +1.
std::vector<ConvergentRow> convergents(std::span<const Digit> digits);

/// (-1)^n e_0 e_1 ... e_{n-1} with e_0 = +1, for 1 <= n <= digits.size().
int alternating_sign_product(std::span<const Digit> digits, std::size_t n);

/// s_0 = 0, s_1 = 1/a_1, s_n = 1/(a_n + e_{n-1} s_{n-1}); entries 0..N.
std::vector<Rational> s_sequence(std::span<const Digit> digits);

/// r_n = a_n + e_n T^n(x) for 1 <= n <= number of digits of x.
Rational r_tail(const Rational& x, std::size_t n);

/// x = (p_n + p_{n-1} e_n t_n) / (q_n + q_{n-1} e_n t_n) from rows n-1, n.
Rational reconstruct(const ConvergentRow& prev, const ConvergentRow& cur, const Rational& t,
                     int eps_n);

/// Inverse of reconstruct: e_n t_n = (q_n x - p_n) / (-q_{n-1} x + p_{n-1}).
Rational signed_tail(const ConvergentRow& prev, const ConvergentRow& cur, const Rational& x);

}  // namespace ocf
