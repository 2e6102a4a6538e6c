#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <limits>
#include <stdexcept>
#include <string>

namespace facs {

// Exact arithmetic everywhere: values never wrap, bounds never saturate.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int ipow(const Int& base, std::uint64_t exp) {
  Int r = 1;
  Int b = base;
  while (exp > 0) {
    if (exp & 1) r *= b;
    b *= b;
    exp >>= 1;
  }
  return r;
}

// Division rounding toward -inf / +inf, b != 0.
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

inline Int rat_floor(const Rat& r) {
  return floor_div(numerator(r), denominator(r));
}

inline Int rat_ceil(const Rat& r) {
  return ceil_div(numerator(r), denominator(r));
}

inline bool rat_is_integer(const Rat& r) { return denominator(r) == 1; }

inline bool fits_int64(const Int& v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

inline Int int_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  return Int(s);
}

}  // namespace facs
