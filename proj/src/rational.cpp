#include "ocf/rational.hpp"

#include "ocf/errors.hpp"

namespace ocf {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(text));
    return make_rational(Integer(text.substr(0, slash)), Integer(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw ValidationError("not a rational number: '" + text + "'");
  }
}

std::string to_string(const Rational& r) { return r.get_str(); }

Integer floor(const Rational& r) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

std::strong_ordering compare_to_G(const Rational& r) {
  if (sgn(r) <= 0) return std::strong_ordering::less;
  // For r > 0: r < G  <=>  r^2 - r - 1 < 0.
  const Rational poly = r * r - r - 1;
  return sgn(poly) < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::strong_ordering compare_to_g2(const Rational& r) {
  if (sgn(r) <= 0) return std::strong_ordering::less;
  if (r >= 1) return std::strong_ordering::greater;
  // On (0, 1) the quadratic t^2 - 3t + 1 is positive exactly left of g^2.
  const Rational poly = r * r - 3 * r + 1;
  return sgn(poly) > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

}  // namespace ocf
