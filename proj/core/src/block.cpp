#include "qnormal/block.hpp"

#include "qnormal/error.hpp"

namespace qnormal {

Block::Block(std::int64_t base, std::vector<digit_t> digits)
    : base_(base), digits_(std::move(digits)) {
  if (base_ < 2) raise(Errc::bad_base, "block base must be >= 2, got " + std::to_string(base_));
  if (digits_.empty()) raise(Errc::empty_block, "blocks must contain at least one digit");
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (static_cast<std::int64_t>(digits_[i]) >= base_)
      raise(Errc::digit_out_of_range, "digit " + std::to_string(digits_[i]) + " at position " +
                                          std::to_string(i + 1) + " exceeds base " +
                                          std::to_string(base_));
  }
}

std::string Block::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(digits_[i]);
  }
  out += ')';
  return out;
}

std::string Block::csv_str() const {
  std::string out;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(digits_[i]);
  }
  return out;
}

Block make_block(std::int64_t base, std::vector<digit_t> digits) {
  return Block(base, std::move(digits));
}

std::vector<std::size_t> kmp_failure(std::span<const digit_t> pattern) {
  std::vector<std::size_t> fail(pattern.size(), 0);
  for (std::size_t i = 1; i < pattern.size(); ++i) {
    std::size_t j = fail[i - 1];
    while (j > 0 && pattern[i] != pattern[j]) j = fail[j - 1];
    if (pattern[i] == pattern[j]) ++j;
    fail[i] = j;
  }
  return fail;
}

BigInt count_occurrences(const Block& pattern, std::span<const digit_t> y, const BigInt& n) {
  if (n < 0) raise(Errc::out_of_range, "count_occurrences requires n >= 0");
  const std::size_t k = pattern.size();
  if (k > y.size() || n == 0) return 0;
  // start positions are capped by both n and the fit bound |y|-k+1
  BigInt cap = BigInt(y.size()) - BigInt(k) + 1;
  if (n < cap) cap = n;
  if (cap <= 0) return 0;
  const auto last_start = cap.convert_to<std::size_t>();

  const auto pat = pattern.digits();
  const auto fail = kmp_failure(pat);
  std::uint64_t count = 0;
  std::size_t j = 0;
  // scan just far enough that every start <= last_start is decided
  const std::size_t scan_end = last_start + k - 1;
  for (std::size_t i = 0; i < scan_end; ++i) {
    const digit_t d = y[i];
    while (j > 0 && d != pat[j]) j = fail[j - 1];
    if (d == pat[j]) ++j;
    if (j == k) {
      ++count;  // match starting at i - k + 2 (1-indexed), necessarily <= last_start
      j = fail[j - 1];
    }
  }
  return BigInt(count);
}

BigInt count_occurrences(const Block& pattern, const Block& y, const BigInt& n) {
  return count_occurrences(pattern, y.digits(), n);
}

}  // namespace qnormal
