#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace annc {

using Rational = boost::multiprecision::cpp_rational;

/// Exact conversion; every finite double is a dyadic rational.
inline Rational rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: nonfinite");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  Rational r(scaled);
  const int shift = exp - 53;
  if (shift >= 0)
    r *= Rational(boost::multiprecision::cpp_int(1) << shift);
  else
    r /= Rational(boost::multiprecision::cpp_int(1) << -shift);
  return r;
}

/// Smallest double nudge of sqrt(x) whose square dominates x; an exact
/// rational upper bound on sqrt(x).
inline Rational rat_sqrt_upper(const Rational& x) {
  if (x < 0) throw std::invalid_argument("rat_sqrt_upper: negative");
  double s = std::sqrt(static_cast<double>(x));
  Rational r = rat_from_double(s);
  while (r * r < x) {
    s = std::nextafter(s, std::numeric_limits<double>::infinity());
    r = rat_from_double(s);
  }
  return r;
}

/// Largest double not exceeding the rational.
inline double double_below(const Rational& x) {
  double d = static_cast<double>(x);
  while (rat_from_double(d) > x) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

}  // namespace annc
