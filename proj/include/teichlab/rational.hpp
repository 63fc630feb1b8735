#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace teichlab {

// Arbitrary-precision rational; always kept in canonical (reduced) form.
using Rational = mpq_class;

// Accepts "p/q", "p", and "-p/q". Throws Error(InvalidArgument) on garbage or q == 0.
Rational parse_rational(std::string_view text);

// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);

// Exact conversion: every finite double is a dyadic rational.
Rational from_double(double x);

// num/den reduced. mpq_class(num, den) alone leaves the value uncanonicalized,
// which breaks equality and arithmetic.
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace teichlab
