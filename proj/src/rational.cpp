#include "tensorforge/rational.hpp"

#include <cmath>

namespace tensorforge {

static bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Rational parse_rational(const std::string& text) {
  std::string num = text, den = "1";
  if (auto pos = text.find('/'); pos != std::string::npos) {
    num = text.substr(0, pos);
    den = text.substr(pos + 1);
  }
  std::string digits = num;
  if (!digits.empty() && digits[0] == '-') digits = digits.substr(1);
  if (!all_digits(digits) || !all_digits(den))
    throw ParseError("malformed rational '" + text + "'");
  if (digits.size() > 1 && digits[0] == '0')
    throw ParseError("malformed rational '" + text + "' (leading zero)");
  if (den.size() > 1 && den[0] == '0')
    throw ParseError("malformed rational '" + text + "' (leading zero)");
  Integer p(num), q(den);
  if (q == 0) throw ParseError("zero denominator in '" + text + "'");
  Integer g;
  mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  if (g != 1) throw ParseError("non-reduced fraction '" + text + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Integer ceil_rational(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return out;
}

std::optional<Rational> rationalize(double x, std::uint64_t denominator_cap) {
  if (!std::isfinite(x) || denominator_cap == 0) return std::nullopt;
  bool neg = x < 0;
  double v = std::fabs(x);
  if (v > 9e15) return std::nullopt;
  // convergents p/q of the continued fraction, capped at the given denominator
  std::uint64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(frac);
    if (fl > 9e15) break;
    auto a = static_cast<std::uint64_t>(fl);
    if (q1 != 0 && a > (denominator_cap - q0) / q1) break;
    std::uint64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > denominator_cap) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = frac - fl;
    if (rem < 1e-12) break;
    frac = 1.0 / rem;
    if (!std::isfinite(frac)) break;
  }
  if (q1 == 0) return std::nullopt;
  Rational r(Integer(std::to_string(p1)), Integer(std::to_string(q1)));
  r.canonicalize();
  if (neg) r = -r;
  return r;
}

}  // namespace tensorforge
