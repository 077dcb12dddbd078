#pragma once

#include <compare>
#include <string>

#include <gmpxx.h>

namespace ocf {

// Arbitrary-precision carriers for every exact path. mpq_class keeps values
// canonical (coprime, positive denominator) after each arithmetic operation.
using Integer = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms; den must be nonzero.
Rational make_rational(const Integer& num, const Integer& den);

/// Parses "p/q" or "p".
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);

/// Floor of a rational, exact.
Integer floor(const Rational& r);

/// Exact comparison of r against G = (1 + sqrt 5) / 2, decided by the sign
/// of r^2 - r - 1. Never equal since G is irrational.
std::strong_ordering compare_to_G(const Rational& r);

/// Exact comparison of r against g^2 = (3 - sqrt 5) / 2, the smaller root of
/// t^2 - 3t + 1. Never equal.
std::strong_ordering compare_to_g2(const Rational& r);

}  // namespace ocf
