#pragma once

// Arbitrary-precision integers and rationals (GMP) plus the small helpers the
// rest of the library needs: floor, lowest-terms text form, parsing.

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace sclforge {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Fractional part in [0, 1).
inline Rational frac_of(const Rational& q) { return q - Rational(floor_of(q)); }

/// Lowest-terms "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& q) { return q.get_str(10); }

inline std::string to_string(const Integer& z) { return z.get_str(10); }

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rational q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational literal '" + s + "'");
  if (q.get_den() == 0)
    throw std::invalid_argument("rational literal with zero denominator '" + s + "'");
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace sclforge
