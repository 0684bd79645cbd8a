#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qnormal/block.hpp"

namespace qnormal {

/// Immutable digit-string source: either an explicit block or the symbolic
/// Champernowne block C_{b,w} (every base-b word of length w concatenated in
/// lexicographic order, w*b^w digits). Champernowne sources stay symbolic so
/// astronomically long strings remain addressable and countable; pattern
/// counts over them are evaluated in closed form, never by enumeration.
class BlockSource {
 public:
  static BlockSource from_block(Block block);
  static BlockSource champernowne(std::int64_t base, std::int64_t width);

  std::int64_t base() const;
  const BigInt& length() const;
  bool is_champernowne() const;
  std::int64_t champernowne_width() const;  // 0 for explicit sources

  /// Digit at 1-indexed position.
  digit_t digit(const BigInt& pos) const;

  /// Occurrences of `pattern` inside this source with start <= start_limit;
  /// the whole occurrence must fit inside the source. Exact.
  BigInt count_prefix_fit(const Block& pattern, const BigInt& start_limit) const;
  /// Occurrences anywhere inside the source (start_limit = length).
  BigInt count_fit(const Block& pattern) const;

  /// Sequential digit reader; O(1) amortized per digit.
  class Cursor {
   public:
    digit_t next();

   private:
    friend class BlockSource;
    std::shared_ptr<const void> keepalive_;
    // explicit source
    const std::vector<digit_t>* digits_ = nullptr;
    std::size_t index_ = 0;
    // champernowne source
    std::int64_t base_ = 0;
    std::int64_t width_ = 0;
    std::vector<digit_t> word_;
    std::int64_t offset_ = 0;
  };
  Cursor cursor(const BigInt& from) const;  // positioned at 1-indexed `from`
  std::vector<digit_t> window(const BigInt& from, std::size_t count) const;

  bool same_source(const BlockSource& other) const { return impl_ == other.impl_; }

 private:
  struct Impl;
  explicit BlockSource(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// The blocks-module generator for C_{b,w}; length is exactly w*b^w.
BlockSource champernowne_block(std::int64_t base, std::int64_t width);

/// Closed-form occurrence count over C_{b,w}: matches of `pattern` starting
/// at positions 1..j_max that fit inside the stream. Requires |pattern| <= w.
BigInt champernowne_count_fit(std::int64_t base, std::int64_t width, const Block& pattern,
                              const BigInt& j_max);

}  // namespace qnormal
