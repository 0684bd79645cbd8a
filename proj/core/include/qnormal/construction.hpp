#pragma once

#include <optional>

#include "qnormal/bff.hpp"
#include "qnormal/cantor.hpp"
#include "qnormal/schedule.hpp"

namespace qnormal {

/// Decomposition of a digit prefix of length n: i is the largest index with
/// L_i <= n, m = n - L_i splits as m = alpha*|x_{i+1}| + beta with
/// 0 <= alpha <= l_{i+1}, 0 <= beta < |x_{i+1}|. The prefix therefore reads
/// l_1 x_1 ... l_i x_i, then alpha full copies of x_{i+1}, then beta digits.
struct PrefixDecomposition {
  std::int64_t i = 1;
  BigInt m, alpha, beta;
};

struct ConstructionOptions {
  bool validate_normality = true;
  // x_i normality is verified for every i whose block fits the scan budget
  BigInt normality_scan_budget = BigInt(2'000'000);
  std::int64_t normality_table_budget = 4'000'000;
};

/// A BFF plus a good sequence, evaluated through index i_cap: cumulative
/// lengths L_i, the piecewise-constant basic sequence q_n = b_i for
/// L_{i-1} < n <= L_i, and the digit stream of x = l_1 x_1 l_2 x_2 ...
/// All position arithmetic is exact big-integer; digits are generated on
/// demand, never materialized wholesale.
class Construction {
 public:
  Construction(BffSpec spec, GoodSequence xs, std::int64_t i_cap,
               const ConstructionOptions& options = {}, bool canonical = false,
               std::string name = {});

  std::int64_t i_cap() const { return i_cap_; }
  const std::string& name() const { return name_; }
  bool canonical() const { return canonical_; }
  const BffSpec& bff() const { return spec_; }
  const GoodSequence& good_sequence() const { return xs_; }

  const BffTerm& term(std::int64_t i) const { return spec_.term(i); }
  const BigInt& x_length(std::int64_t i) const;
  BlockSource x(std::int64_t i) const;

  /// L_i = sum_{j<=i} l_j |x_j|; L_0 = 0. Defined for i <= i_cap.
  const BigInt& cumulative_length(std::int64_t i) const;
  const BigInt& total_length() const { return cumulative_length(i_cap_); }

  PrefixDecomposition decompose(const BigInt& n) const;

  /// Digits E_{from} .. E_{from+count-1}, located arithmetically (random
  /// access; no earlier digits are generated).
  std::vector<digit_t> digit_stream(const BigInt& from, std::size_t count) const;

  /// Exact N_n^Q(B, x): occurrences starting at positions 1..n; an occurrence
  /// may extend past n into the continuing stream.
  BigInt count_prefix(const Block& pattern, const BigInt& n) const;

  /// q_n = b_i for L_{i-1} < n <= L_i, as a run schedule through L_{i_cap}.
  const BasicSequence& basic_sequence() const { return q_; }

  /// Schedule of the first `digits` stream digits (terms clipped as needed).
  ConcatSchedule prefix_schedule(const BigInt& digits) const;

 private:
  BffSpec spec_;
  GoodSequence xs_;
  std::int64_t i_cap_;
  bool canonical_ = false;
  std::string name_;
  std::vector<BigInt> cum_len_;  // L_0 .. L_{i_cap}
  std::vector<BigInt> x_len_;    // |x_1| .. |x_{i_cap+1}|
  BasicSequence q_ = BasicSequence::constant(2);
  ConcatSchedule full_;  // terms 1..i_cap
};

struct ScaleOverrides {
  std::function<BigInt(std::int64_t)> l_rule;        // default i^{3i}
  std::function<std::int64_t(std::int64_t)> w_rule;  // default i^2
  std::optional<Block> x1;                           // default (0,1) in base 2
};

/// The canonical schedule: x_1=(0,1), b_1=2, l_1=0, eps_1=3/5, k_1=1, p_1=2,
/// mu_1 = lambda_2; for i >= 2: x_i = C_{i,i^2}, b_i = i, l_i = i^{3i},
/// eps_i = 1/i, k_i = i, p_i = i, mu_i = lambda_i. Scale overrides produce
/// desk-sized variants, labeled non-canonical; overrides that break the BFF
/// invariants raise BadScale.
Construction canonical_instance(std::int64_t i_cap, const ScaleOverrides& overrides = {},
                                  const ConstructionOptions& options = {});

}  // namespace qnormal
