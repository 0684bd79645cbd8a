#include "qnormal/highfloat.hpp"

#include <cmath>
#include <sstream>

namespace qnormal {

unsigned digits10_for_bits(unsigned bits) {
  if (bits < 8) bits = 8;
  return static_cast<unsigned>(std::ceil(bits * 0.3010299956639812)) + 1;
}

PrecisionGuard::PrecisionGuard(unsigned bits)
    : saved_digits10_(HighFloat::default_precision()) {
  HighFloat::default_precision(digits10_for_bits(bits));
}

PrecisionGuard::~PrecisionGuard() { HighFloat::default_precision(saved_digits10_); }

HighFloat to_highfloat(const Rational& r, unsigned bits) {
  PrecisionGuard guard(bits);
  HighFloat num(numerator(r));
  HighFloat den(denominator(r));
  return num / den;
}

HighFloat to_highfloat(const BigInt& v, unsigned bits) {
  PrecisionGuard guard(bits);
  return HighFloat(v);
}

std::string highfloat_string(const HighFloat& v, int significant) {
  std::ostringstream os;
  os << std::setprecision(significant) << v;
  return os.str();
}

}  // namespace qnormal
