#pragma once

#include <span>
#include <string>
#include <vector>

#include "qnormal/numeric.hpp"

namespace qnormal {

using digit_t = std::uint32_t;

/// Finite digit string over {0, ..., base-1}. The empty block is rejected.
/// Counting interfaces index positions from 1.
class Block {
 public:
  Block(std::int64_t base, std::vector<digit_t> digits);

  std::int64_t base() const { return base_; }
  std::size_t size() const { return digits_.size(); }
  std::span<const digit_t> digits() const { return digits_; }
  digit_t at(std::size_t pos) const { return digits_[pos - 1]; }  // 1-indexed

  bool operator==(const Block&) const = default;

  /// "(2,3,5)" form for messages.
  std::string str() const;
  /// "2-3-5" form for CSV cells.
  std::string csv_str() const;

 private:
  std::int64_t base_;
  std::vector<digit_t> digits_;
};

Block make_block(std::int64_t base, std::vector<digit_t> digits);

/// Occurrences of `pattern` in `y` starting at positions 1..n; overlapping
/// occurrences count and every occurrence must fit inside `y`.
BigInt count_occurrences(const Block& pattern, std::span<const digit_t> y, const BigInt& n);
BigInt count_occurrences(const Block& pattern, const Block& y, const BigInt& n);

/// KMP failure table for a digit pattern.
std::vector<std::size_t> kmp_failure(std::span<const digit_t> pattern);

}  // namespace qnormal
