#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace qnormal {

// Counting paths are exact everywhere: positions, lengths and occurrence
// counts are arbitrary-precision integers, ratios are exact rationals.
using BigInt = boost::multiprecision::cpp_int;
using BigCount = BigInt;  // non-negative by convention
using Rational = boost::multiprecision::cpp_rational;

BigInt ipow(const BigInt& base, std::uint64_t exp);

/// ceil(a / b) for a >= 0, b > 0.
BigInt ceil_div(const BigInt& a, const BigInt& b);

/// Natural log of v >= 1, accurate to ~1 ulp of double regardless of size.
double log_big(const BigInt& v);

/// Natural log of a positive rational whose parts may far exceed double range.
double log_rational(const Rational& r);

/// Deterministic decimal rendering with `significant` digits (round half up),
/// fixed notation for moderate exponents and scientific otherwise. Pure
/// integer arithmetic; no locale or floating point involved.
std::string to_decimal_string(const Rational& r, int significant = 20);

BigInt parse_bigint(std::string_view text);

/// Accepts "p/q", plain integers and decimal literals ("0.25"); exact.
Rational parse_rational(std::string_view text);

}  // namespace qnormal
