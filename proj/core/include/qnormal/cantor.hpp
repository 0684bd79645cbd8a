#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qnormal/highfloat.hpp"
#include "qnormal/numeric.hpp"

namespace qnormal {

/// One run of identical bases: positions (prev end, end] share `base`.
struct QRun {
  BigInt end;
  BigInt base;
};

/// Basic sequence q_1, q_2, ... of integer bases >= 2, in one of four forms:
/// a constant base, an explicit finite list, a closed-form rule n -> q_n, or
/// a piecewise-constant run schedule (the construction's q_n = b_i form).
class BasicSequence {
 public:
  static BasicSequence constant(BigInt base);
  static BasicSequence from_list(std::vector<BigInt> qs);
  static BasicSequence from_rule(std::string name, std::function<BigInt(const BigInt&)> rule);
  static BasicSequence from_runs(std::vector<QRun> runs);

  BigInt at(const BigInt& n) const;  // q_n, 1-indexed
  bool defined_through(const BigInt& n) const;
  bool has_runs() const;
  /// Runs clipped to cover positions 1..n (requires has_runs()).
  std::vector<QRun> runs_through(const BigInt& n) const;
  const std::string& describe() const { return description_; }

 private:
  enum class Form { constant, list, rule, runs };
  Form form_ = Form::constant;
  BigInt constant_ = 2;
  std::vector<BigInt> list_;
  std::function<BigInt(const BigInt&)> rule_;
  std::vector<QRun> runs_;
  std::string description_;
};

enum class SumMode { exact, floating };

/// Q_n^(k) = sum_{j=1..n} 1/(q_j q_{j+1} ... q_{j+k-1}).
struct PartialSum {
  BigInt n;
  std::int64_t k = 1;
  std::optional<Rational> exact;
  HighFloat value;
  HighFloat error_bound;
};

struct SumOptions {
  unsigned precision_bits = kDefaultPrecisionBits;
  BigInt term_budget = BigInt(2'000'000);  // naive-summation cap
};

/// Exact mode returns a rational (and a zero bound); floating mode returns a
/// compensated HighFloat sum with a certified first-order error bound.
/// Piecewise-constant sequences are summed by run-length grouping: whole runs
/// contribute in O(1) with at most k-1 mixed-base window terms per junction.
PartialSum q_partial_sum(const BasicSequence& q, const BigInt& n, std::int64_t k, SumMode mode,
                         const SumOptions& options = {});

struct DigitsValueExact {
  Rational value;
  Rational tail_bound;  // 1/(q_1 ... q_n)
};
struct DigitsValueFloat {
  HighFloat value;
  HighFloat tail_bound;
  HighFloat rounding_bound;
};

DigitsValueExact digits_to_value_exact(const BasicSequence& q, std::span<const BigInt> digits,
                                       std::size_t n);
DigitsValueFloat digits_to_value(const BasicSequence& q, std::span<const BigInt> digits,
                                 std::size_t n, unsigned precision_bits = kDefaultPrecisionBits);

struct GreedyDigits {
  std::vector<BigInt> digits;
  Rational remainder;  // x_{n+1} in [0,1): x = sum + remainder/(q_1...q_n)
};

/// Greedy digit extraction E_j = floor(x_j q_j); always yields the expansion
/// whose digits terminate on exact rationals (never an all-(q-1) tail).
GreedyDigits value_to_digits(const BasicSequence& q, const Rational& x, std::size_t n);

struct DivergenceRow {
  BigInt n;
  double value;
  std::string value_str;
};
struct DivergenceReport {
  std::int64_t k = 1;
  std::vector<DivergenceRow> rows;
  bool divergence_consistent = false;
};

/// Evidence-only divergence diagnostic: Q_n^(k) at each checkpoint, verdict
/// "divergence-consistent" iff strictly increasing with no relative plateau.
DivergenceReport k_divergence_report(const BasicSequence& q, std::int64_t k,
                                     std::span<const BigInt> checkpoints,
                                     const SumOptions& options = {},
                                     double plateau_tol = 1e-9);

}  // namespace qnormal
