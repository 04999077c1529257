#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "qrr/errors.hpp"

namespace qrr {

// Exact scalar of all series. Arbitrary precision, canonical reduced form with
// positive denominator is maintained by the backend.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

// Exponent arithmetic is done in Rat and narrowed here; a fractional exponent
// is a hard error, never rounded.
inline long long to_integer_exponent(const Rat& r, const char* what) {
  if (!is_integer(r))
    throw error(errc::non_integer_exponent, std::string(what) + " evaluates to " + r.str());
  Int n = numerator(r);
  return static_cast<long long>(n);
}

}  // namespace qrr
