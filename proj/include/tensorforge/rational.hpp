#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace tensorforge {

// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
// positive denominator), which is also the wire format invariant.
using Rational = mpq_class;
using Integer = mpz_class;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "p" or "p/q". Rejects anything not already in canonical form:
// non-reduced fractions, zero or negative denominators, stray characters.
Rational parse_rational(const std::string& text);

// Canonical form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

// Ceiling of a rational as an exact integer.
Integer ceil_rational(const Rational& q);

// Nearest rational with denominator <= cap, via continued fractions.
// Returns nothing for non-finite input.
std::optional<Rational> rationalize(double x, std::uint64_t denominator_cap);

// mpq_class's two-argument constructors do not canonicalize; these do.
inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace tensorforge
