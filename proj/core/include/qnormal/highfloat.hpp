#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include "qnormal/numeric.hpp"

namespace qnormal {

// Variable-precision float used by the non-exact summation/conversion modes.
// Precision is runtime-configurable in bits of mantissa (default 128).
using HighFloat = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 128;

unsigned digits10_for_bits(unsigned bits);

/// Sets the thread's default HighFloat precision for the guard's lifetime.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_digits10_;
};

HighFloat to_highfloat(const Rational& r, unsigned bits);
HighFloat to_highfloat(const BigInt& v, unsigned bits);

/// Deterministic decimal rendering of a HighFloat.
std::string highfloat_string(const HighFloat& v, int significant = 20);

}  // namespace qnormal
