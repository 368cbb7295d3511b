#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "homconf/error.hpp"

namespace homconf {

// Exact rational scalar over arbitrary-precision integers. The backend keeps
// every value reduced with a positive denominator and a canonical zero (0/1),
// which is exactly the contract the rest of the engine relies on.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational rational_of(long long n, long long d = 1) {
  if (d == 0) fail_usage("rational with zero denominator");
  return Rational(BigInt(n), BigInt(d));
}

inline std::string to_string(const Rational& q) { return q.str(); }

} // namespace homconf
