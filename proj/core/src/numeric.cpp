#include "qnormal/numeric.hpp"

#include "qnormal/error.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace qnormal {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::bad_base: return "BadBase";
    case Errc::bad_length: return "BadLength";
    case Errc::empty_block: return "EmptyBlock";
    case Errc::digit_out_of_range: return "DigitOutOfRange";
    case Errc::too_long: return "TooLong";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::unfeasible: return "Unfeasible";
    case Errc::degenerate_schedule: return "DegenerateSchedule";
    case Errc::bad_scale: return "BadScale";
    case Errc::undefined_sequence: return "Undefined";
    case Errc::bad_config: return "BadConfig";
    case Errc::internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

BigInt ipow(const BigInt& base, std::uint64_t exp) {
  BigInt result = 1;
  BigInt b = base;
  while (exp != 0) {
    if (exp & 1u) result *= b;
    exp >>= 1u;
    if (exp != 0) b *= b;
  }
  return result;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  if (b <= 0) raise(Errc::internal, "ceil_div divisor must be positive");
  return (a + b - 1) / b;
}

double log_big(const BigInt& v) {
  if (v <= 0) raise(Errc::internal, "log_big requires a positive argument");
  const auto bits = static_cast<std::uint64_t>(boost::multiprecision::msb(v));
  if (bits <= 62) return std::log(v.convert_to<double>());
  const BigInt top = v >> (bits - 52);
  return std::log(top.convert_to<double>()) +
         static_cast<double>(bits - 52) * std::numbers::ln2;
}

double log_rational(const Rational& r) {
  if (r <= 0) raise(Errc::internal, "log_rational requires a positive argument");
  return log_big(numerator(r)) - log_big(denominator(r));
}

namespace {

BigInt pow10(std::uint64_t e) { return ipow(10, e); }

// decimal digit count of v >= 1
int digits10(const BigInt& v) {
  int n = static_cast<int>(v.str().size());
  return n;
}

}  // namespace

std::string to_decimal_string(const Rational& r, int significant) {
  if (significant < 1) significant = 1;
  if (r == 0) return "0";
  const bool neg = r < 0;
  BigInt num = neg ? BigInt(-numerator(r)) : BigInt(numerator(r));
  const BigInt den = denominator(r);

  // exponent e with 10^e <= num/den < 10^{e+1}
  std::int64_t e = 0;
  if (num >= den) {
    e = digits10(num / den) - 1;
  } else {
    BigInt scaled = num;
    while (scaled < den) {
      scaled *= 10;
      --e;
    }
  }

  // mantissa with `significant` digits, round half up
  const std::int64_t shift = significant - 1 - e;
  BigInt scaled_num = num;
  BigInt scaled_den = den;
  if (shift >= 0)
    scaled_num *= pow10(static_cast<std::uint64_t>(shift));
  else
    scaled_den *= pow10(static_cast<std::uint64_t>(-shift));
  BigInt mant = scaled_num / scaled_den;
  const BigInt rem = scaled_num - mant * scaled_den;
  if (2 * rem >= scaled_den) ++mant;
  if (mant >= pow10(static_cast<std::uint64_t>(significant))) {
    mant /= 10;
    ++e;
  }

  std::string digits = mant.str();
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

  std::string out;
  if (neg) out += '-';
  if (e >= 0 && e <= 18) {
    if (static_cast<std::size_t>(e) + 1 >= digits.size()) {
      out += digits;
      out.append(static_cast<std::size_t>(e) + 1 - digits.size(), '0');
    } else {
      out += digits.substr(0, static_cast<std::size_t>(e) + 1);
      out += '.';
      out += digits.substr(static_cast<std::size_t>(e) + 1);
    }
  } else if (e < 0 && e >= -6) {
    out += "0.";
    out.append(static_cast<std::size_t>(-e) - 1, '0');
    out += digits;
  } else {
    out += digits.substr(0, 1);
    if (digits.size() > 1) {
      out += '.';
      out += digits.substr(1);
    }
    out += 'e';
    out += std::to_string(e);
  }
  return out;
}

BigInt parse_bigint(std::string_view text) {
  if (text.empty()) raise(Errc::bad_config, "empty integer literal");
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') pos = 1;
  if (pos == text.size()) raise(Errc::bad_config, "bare sign is not an integer");
  for (std::size_t i = pos; i < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      raise(Errc::bad_config, "invalid integer literal '" + std::string(text) + "'");
  return BigInt(std::string(text));
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const BigInt p = parse_bigint(text.substr(0, slash));
    const BigInt q = parse_bigint(text.substr(slash + 1));
    if (q == 0) raise(Errc::bad_config, "zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_bigint(text));
  std::string_view head = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (frac.empty()) raise(Errc::bad_config, "trailing dot in '" + std::string(text) + "'");
  bool neg = !head.empty() && head[0] == '-';
  std::string merged(head.empty() || head == "-" || head == "+" ? "0" : std::string(head));
  const BigInt whole = parse_bigint(merged);
  const BigInt frac_num = parse_bigint(frac);
  const BigInt frac_den = pow10(frac.size());
  Rational value = Rational(abs(whole)) + Rational(frac_num, frac_den);
  return neg ? -value : value;
}

}  // namespace qnormal
