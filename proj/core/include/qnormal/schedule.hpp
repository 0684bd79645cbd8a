#pragma once

#include <utility>
#include <vector>

#include "qnormal/block_source.hpp"

namespace qnormal {

struct ScheduleTerm {
  BigInt multiplicity;  // >= 0; zero-multiplicity terms contribute nothing
  BlockSource source;
};

/// Symbolic concatenation l1*x1 l2*x2 ...; the digit stream of the schedule
/// is never materialized unless explicitly requested. Terms may carry
/// different bases. Immutable and freely shareable.
class ConcatSchedule {
 public:
  ConcatSchedule() = default;
  explicit ConcatSchedule(std::vector<ScheduleTerm> terms);

  const std::vector<ScheduleTerm>& terms() const { return terms_; }
  const BigInt& length() const { return length_; }
  std::int64_t max_base() const { return max_base_; }

  digit_t digit(const BigInt& pos) const;  // 1-indexed virtual random access
  std::vector<digit_t> window(const BigInt& from, std::size_t count) const;

 private:
  std::vector<ScheduleTerm> terms_;
  BigInt length_ = 0;
  std::int64_t max_base_ = 2;
};

ConcatSchedule concat(std::vector<std::pair<BigInt, Block>> terms);

/// Explicit digits of the schedule; errors with TooLong when the represented
/// length exceeds `limit`. The result's base is the max of the term bases.
Block materialize(const ConcatSchedule& schedule, const BigInt& limit);

/// Occurrences of `pattern` starting at positions 1..n of the virtual stream,
/// fitting entirely inside the schedule (matches count_occurrences on the
/// materialized string). n must not exceed the represented length.
BigInt count_in_schedule(const ConcatSchedule& schedule, const Block& pattern, const BigInt& n);

/// Core counter: occurrences starting at positions 1..n, where digits through
/// n + |pattern| - 1 must exist in the schedule (the occurrence may end past
/// n). Exact for any term mix, including symbolic Champernowne terms.
BigInt count_starts_within(const ConcatSchedule& schedule, const Block& pattern, const BigInt& n);

}  // namespace qnormal
