#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <stdexcept>
#include <string>

namespace dpz {

// All coefficient arithmetic is exact. cpp_rational keeps values reduced
// with a positive denominator, which is the invariant the rest of the
// library relies on.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(Integer(num), Integer(den));
}

/// Parses "p", "-p" or "p/q" (q > 0 after normalization).
inline Rational parse_rational(const std::string& text) {
  auto bad = [&] { return std::invalid_argument("malformed rational: '" + text + "'"); };
  if (text.empty()) throw bad();
  std::size_t slash = text.find('/');
  auto parse_int = [&](const std::string& part) {
    if (part.empty()) throw bad();
    std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (start == part.size()) throw bad();
    for (std::size_t i = start; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) throw bad();
    Integer value(part.substr(start));
    return part[0] == '-' ? Integer(-value) : value;
  };
  if (slash == std::string::npos) return Rational(parse_int(text));
  Integer num = parse_int(text.substr(0, slash));
  Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw bad();
  return Rational(num, den);
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace dpz
