#include "tcs/rational.hpp"

#include <cctype>

#include "tcs/errors.hpp"

namespace tcs {

std::string to_string(const Rational& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// leading zeros would make GMP read the digits as octal
BigInt parse_integer(std::string_view s) {
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return BigInt(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  bool negative = false;
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw ParseError("malformed rational: '" + std::string(text) + "'");
    BigInt d = parse_integer(den);
    if (d == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
    result = Rational(parse_integer(num), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw ParseError("malformed decimal: '" + std::string(text) + "'");
    }
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt digits = parse_integer(std::string(whole.empty() ? "0" : whole) + std::string(frac));
    result = Rational(digits, scale);
  } else {
    if (!all_digits(body)) throw ParseError("malformed rational: '" + std::string(text) + "'");
    result = Rational(parse_integer(body));
  }
  return negative ? Rational(-result) : result;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational ipow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (base == 0) throw DomainError("ipow: zero base with negative exponent");
    return ipow(Rational(1) / base, -exponent);
  }
  Rational result = 1;
  Rational square = base;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1U) result *= square;
    e >>= 1U;
    if (e != 0) square *= square;
  }
  return result;
}

}  // namespace tcs
