#pragma once

#include <iosfwd>

#include "qnormal/construction.hpp"

namespace qnormal {

/// Everything the prefix-analysis formulas need at a fixed (n, k): the
/// decomposition (i, m, alpha, beta) plus the surrounding schedule quantities
/// and the surrogate sums S, all exact.
struct PrefixContext {
  const Construction* c = nullptr;
  std::int64_t k = 1;
  BigInt n;
  std::int64_t i = 1;
  BigInt m, alpha, beta;
  BigInt big_l_im1, big_l_i;  // L_{i-1}, L_i
  BigInt l_i, l_ip1;
  BigInt len_i, len_ip1;  // |x_i|, |x_{i+1}|
  std::int64_t b_i = 2, b_ip1 = 2;
  std::int64_t p_i = 1, k_i = 1;
  Rational eps_i, eps_ip1;
  Rational s_n;       // S_n^{(k)}
  Rational s_at_l_i;  // S_{L_i}^{(k)}
  Rational s_at_l_im1;
};

PrefixContext make_context(const Construction& c, std::int64_t k, const BigInt& n);

/// S_n^{(k)} = sum_{j<=i} b_j^{-k} l_j |x_j| + b_{i+1}^{-k} m. Exact.
Rational s_partial_sum(const PrefixContext& ctx);

/// kappa = (L_{i-1} + k(l_i+1) + (1+eps_i) b_i^-k l_i |x_i|)
///         + ((1+eps_{i+1}) b_{i+1}^-k |x_{i+1}| + k) alpha + beta.
Rational kappa(const PrefixContext& ctx);

/// min{t : k < |x_t|}, the first index whose block is longer than k.
std::int64_t s_min_index(const Construction& c, std::int64_t k);

struct SMinusQRow {
  BigInt n;
  Rational s, q, diff, bound;
  bool pass = false;
};
struct SMinusQReport {
  std::int64_t k = 1;
  std::int64_t s_start = 1;
  Rational r;  // S - Q at L_{s-1}
  std::vector<SMinusQRow> rows;
  bool non_negative = false;
  bool non_decreasing = false;
  bool bounded = false;
  bool pass() const { return non_negative && non_decreasing && bounded; }
};

/// Finite form of the S/Q comparison: 0 <= S_n - Q_n < r + k(i+2-s) at every
/// checkpoint, and S - Q non-decreasing across checkpoints. Exact rationals.
SMinusQReport s_minus_q_bound_check(const Construction& c, std::int64_t k,
                                    std::span<const BigInt> checkpoints);

struct SegmentBoundsReport {
  bool hyp_met = false;
  BigInt count_xi;           // N_{|x_i|}(B, x_i)
  Rational xi_lo, xi_hi;     // (1 -+ eps_i) b_i^-k |x_i|
  BigInt count_mid;          // N_m(B, l_{i+1} x_{i+1})
  Rational mid_lo, mid_hi;   // alpha-copy sandwich, upper slack beta + k alpha
  bool pass = false;
};
SegmentBoundsReport check_segment_count_bounds(const Construction& c, std::int64_t k, const BigInt& n,
                              const Block& pattern);

struct PrefixBoundsReport {
  bool hyp_met = false;
  BigInt count;  // N_n^Q(B, x)
  Rational lower, upper;
  bool pass = false;
};
PrefixBoundsReport check_prefix_count_bounds(const Construction& c, std::int64_t k, const BigInt& n,
                              const Block& pattern);

/// The rational envelope functions f_i and g_i sharing one denominator.
struct FGValues {
  Rational f, g;
};
FGValues f_g(const PrefixContext& ctx, const BigInt& w, const BigInt& z);

enum class CheckVerdict { pass, fail, hypothesis_unmet };

struct GridSpec {
  int per_axis = 8;
  unsigned seed = 1;
};

struct EnvelopeGridReport {
  CheckVerdict verdict = CheckVerdict::hypothesis_unmet;
  Rational bound;  // g_i(0, |x_{i+1}|) = eps_i'
  std::string detail;
};

/// Monotonicity of g_i over {0..l_{i+1}} x {0..|x_{i+1}|-1} (decreasing in w,
/// increasing in z) and max strictly below g_i(0, |x_{i+1}|), on a
/// corner-biased grid. Hypotheses (|x_i| > 4k, |x_{i+1}| > k b_{i+1}^k /
/// (eps_i - eps_{i+1}), l_i > 0) are reported when unmet, not failed.
EnvelopeGridReport check_envelope_grid(const Construction& c, std::int64_t k, std::int64_t i,
                              const GridSpec& grid = {});

/// eps_i' = (L_{i-1} + eps_i b_i^-k l_i |x_i| + k(l_i+1) + |x_{i+1}|)
///          / (S_{L_i} + b_{i+1}^-k |x_{i+1}|). Exact.
Rational epsilon_prime(const PrefixContext& ctx);

struct EpsilonPrimeRow {
  std::int64_t i = 0;
  bool defined = false;  // l_i >= 1 required
  double log_eps_prime = 0;
  double log_copy_overhead_ratio = 0;  // k(l_i+1) / (b_i^-k l_i |x_i|)
  bool copy_overhead_bound_ok = false;  // ratio <= 2k b_i^k / |x_i|
  double log_early_mass_ratio = 0;  // sum_{j<=i-2} l_j |x_j| / (b_i^-k l_i |x_i|)
};
struct EpsilonPrimeTrend {
  std::int64_t k = 1;
  std::vector<EpsilonPrimeRow> rows;
  bool tail_decreasing = false;  // eps_i' strictly decreasing over the tail
  bool copy_overhead_all_ok = false;
};

/// Trend diagnostic for eps_i' -> 0 over i in [i_lo, i_hi], log domain, with
/// the component ratios reported per index. Tail monotonicity is evidence of
/// the limit, not proof.
EpsilonPrimeTrend epsilon_prime_trend(const Construction& c, std::int64_t k, std::int64_t i_lo,
                                      std::int64_t i_hi);

struct DiscrepancyRow {
  BigInt n;
  Block block{2, {0}};  // placeholder until the cell is filled
  BigInt count;        // N_n^Q
  Rational q;          // Q_n^{(k)}
  Rational ratio;      // N / Q
  Rational abs_err;    // |ratio - 1|
  Rational eps_prime;
  Rational smq_over_s;
  Rational envelope;   // 2 eps_i' + (S-Q)/S
  bool hyp_met = false;
  bool pre_asymptotic = false;  // N = 0
  bool pass = false;            // abs_err < envelope
};
struct DiscrepancyReport {
  std::int64_t k = 1;
  std::vector<DiscrepancyRow> rows;
  bool all_pass = false;  // over rows with hyp_met
  void write_csv(std::ostream& os) const;
};

/// N_n^Q / Q_n^(k) against the 2*eps_i' + (S-Q)/S envelope for every (checkpoint,
/// block) cell. Exact arithmetic end to end; cells may evaluate in parallel,
/// rows are emitted in input order regardless of thread count.
DiscrepancyReport discrepancy_sweep(const Construction& c, std::span<const Block> blocks,
                                    std::int64_t k, std::span<const BigInt> checkpoints,
                                    int threads = 1);

struct ChampernowneCountReport {
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  std::vector<std::string> failure_details;
  bool pass() const { return failures == 0 && cases > 0; }
};

/// Exhaustive verification, for every b <= b_max and w <= w_max, that each
/// base-b block of length k <= w occurs in C_{b,w} between (w-k+1) b^{w-k}
/// and w b^{w-k} times, and that C_{b,w} is (K/w, K, lambda_b)-normal for
/// every K < w. Exact, zero tolerance.
ChampernowneCountReport verify_champernowne_counting(std::int64_t b_max, std::int64_t w_max,
                                                   std::int64_t budget = 10'000'000,
                                                   int threads = 1);

}  // namespace qnormal
