#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace tcs {

/// Exact rational number backed by GMP. Always stored in canonical (reduced,
/// positive denominator) form. Expression templates are disabled so that
/// `auto` deduces a value, not a lazy expression.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// "p/q" with q >= 1, integers included ("3/1", "0/1").
std::string to_string(const Rational& value);

/// Accepts "p/q", "p", "-p/q" and finite decimals such as "0.25" or "-1.5".
/// Throws tcs::ParseError on anything else.
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

inline int sgn(const Rational& value) { return value.sign(); }

/// base^exponent for any integer exponent (base must be nonzero if exponent < 0).
Rational ipow(const Rational& base, int exponent);

}  // namespace tcs
