#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "qnormal/block_source.hpp"
#include "qnormal/weighting.hpp"

namespace qnormal {

struct BffTerm {
  BigInt l;        // copy count, non-negative, non-decreasing
  std::int64_t b;  // base, >= 2, non-decreasing
  std::int64_t p;  // weighting uniformity bound, 1 <= p <= b, non-decreasing
  Rational eps;    // in (0,1), strictly decreasing
  std::int64_t k;  // normality order, >= 1, non-decreasing
  Weighting mu;
};

struct KLimit {
  bool finite = false;
  std::int64_t value = 0;  // limit of k_i when finite
  static KLimit infinite() { return {false, 0}; }
  static KLimit finite_at(std::int64_t k) { return {true, k}; }
};

/// Block friendly family: the 6-tuple schedule (l_i, b_i, p_i, eps_i, k_i,
/// mu_i) given by a closed-form rule. Monotonicity invariants are checked
/// eagerly on every evaluated prefix; violations raise errors naming the
/// offending index. The limit of k_i is declared, not inferred.
class BffSpec {
 public:
  BffSpec(std::function<BffTerm(std::int64_t)> rule, KLimit k_limit, std::string name);

  const BffTerm& term(std::int64_t i) const;  // 1-indexed
  const KLimit& k_limit() const { return k_limit_; }
  const std::string& name() const { return name_; }

 private:
  struct State {
    std::mutex mutex;
    std::vector<BffTerm> cache;
  };
  std::function<BffTerm(std::int64_t)> rule_;
  KLimit k_limit_;
  std::string name_;
  std::shared_ptr<State> state_;
};

struct RangeSet {
  bool all_naturals = false;
  std::int64_t max_k = 0;
  bool contains(std::int64_t k) const { return k >= 0 && (all_naturals || k <= max_k); }
};

/// R(W): {0..K} when lim k_i = K is declared finite, all naturals otherwise.
RangeSet range_set(const BffSpec& spec);

/// The candidate blocks x_i. Lengths are available in closed form so growth
/// diagnostics run far beyond materializable sizes; digit access may be
/// absent for length-only sequences.
class GoodSequence {
 public:
  GoodSequence(std::function<BlockSource(std::int64_t)> source, std::string name);
  static GoodSequence from_lengths(std::function<BigInt(std::int64_t)> length,
                                   std::function<double(std::int64_t)> log_length,
                                   std::string name);

  bool has_sources() const { return static_cast<bool>(source_); }
  BlockSource source(std::int64_t i) const;
  BigInt length(std::int64_t i) const;
  double log_length(std::int64_t i) const;
  const std::string& name() const { return name_; }

 private:
  GoodSequence() = default;
  std::function<BlockSource(std::int64_t)> source_;
  std::function<BigInt(std::int64_t)> length_;
  std::function<double(std::int64_t)> log_length_;
  std::string name_;
};

/// Per-index values of the three growth ratios, in the natural-log domain.
struct WGoodRow {
  std::int64_t i = 0;
  double log_r1 = 0;  // |x_i| / (b_i^k / (eps_{i-1} - eps_i)); must trend to +inf
  double log_r2 = 0;  // (l_{i-1}/l_i)(|x_{i-1}|/|x_i|) i b_i^k; must trend to 0
  double log_r3 = 0;  // (1/l_i)(|x_{i+1}|/|x_i|) b_i^k; must trend to 0
  bool has_r2 = false;
  bool has_r3 = false;
};

struct WGoodReport {
  std::int64_t k = 0;
  std::vector<WGoodRow> rows;
  bool r1_increasing = false;
  bool r2_decreasing = false;
  bool r3_decreasing = false;
  bool pass() const { return r1_increasing && r2_decreasing && r3_decreasing; }
};

/// Trend check over the evaluated prefix: asymptotic claims are undecidable
/// from finite data, so the verdict demands strict monotonicity in the proven
/// direction over the tail (last half) of the evaluated rows, alongside the
/// full numeric report. Evidence, not proof.
WGoodReport check_w_good(const BffSpec& spec, const GoodSequence& xs, std::int64_t i_max,
                         std::int64_t k);

/// Shared tail-monotonicity helper: strict comparison over the last half.
bool tail_strictly_monotone(std::span<const double> values, bool increasing);

}  // namespace qnormal
