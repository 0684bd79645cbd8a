#pragma once

#include <functional>
#include <optional>
#include <string>

#include "qnormal/block_source.hpp"

namespace qnormal {

/// A weighting assigns each finite digit block a frequency in [0,1], with the
/// length-(k+1) family marginalizing to the length-k family. The uniform
/// weighting in base b maps every base-b block of length k to b^-k (and blocks
/// carrying digits >= b to 0); it evaluates as an exact rational. Custom
/// weightings evaluate as doubles with a declared tolerance.
class Weighting {
 public:
  enum class Kind { uniform, custom };

  static Weighting uniform(std::int64_t base);
  static Weighting custom(std::string name,
                          std::function<double(std::span<const digit_t>)> fn, double tol);

  Kind kind() const { return kind_; }
  std::int64_t base() const { return base_; }
  const std::string& name() const { return name_; }
  double tolerance() const { return tol_; }

  /// Exact value; only uniform weightings support this.
  Rational value(std::span<const digit_t> block) const;
  double value_approx(std::span<const digit_t> block) const;

 private:
  Kind kind_ = Kind::uniform;
  std::int64_t base_ = 2;
  std::string name_;
  std::function<double(std::span<const digit_t>)> fn_;
  double tol_ = 0.0;
};

struct NormalityOptions {
  std::int64_t table_budget = 4'000'000;   // sum of alphabet^m over m <= k
  BigInt scan_budget = BigInt(200'000'000);  // stream length cap
};

struct NormalityReport {
  bool pass = false;
  std::optional<Block> worst;  // block with extreme ratio N / (mu * |y|)
  double worst_ratio = 1.0;
  BigInt length;
  std::int64_t max_len_checked = 0;
};

/// Is `y` within relative eps of mu-expected counts for every block of length
/// m <= k over digits < alphabet_bound? Exact arithmetic for uniform mu.
NormalityReport check_normality(const BlockSource& y, const Rational& eps, std::int64_t k,
                                const Weighting& mu, std::int64_t alphabet_bound,
                                const NormalityOptions& options = {});
NormalityReport check_normality(const Block& y, const Rational& eps, std::int64_t k,
                                const Weighting& mu, std::int64_t alphabet_bound,
                                const NormalityOptions& options = {});

/// Does mu assign b^-k to every base-p block of every length k <= k_max,
/// within tol? Exhaustive over p^k blocks per length.
bool is_pb_uniform(const Weighting& mu, std::int64_t p, std::int64_t b, std::int64_t k_max,
                   const Rational& tol, std::int64_t eval_budget = 2'000'000);

/// Marginalization identity mu^(k)(B) = sum_j mu^(k+1)(B, j) over j <
/// digit_bound, for every B of length < k_max over digits < digit_bound.
bool check_weighting_consistency(const Weighting& mu, std::int64_t digit_bound,
                                 std::int64_t k_max, const Rational& tol,
                                 std::int64_t eval_budget = 2'000'000);

}  // namespace qnormal
