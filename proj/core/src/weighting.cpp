#include "qnormal/weighting.hpp"

#include "qnormal/error.hpp"

#include <cmath>
#include <limits>

namespace qnormal {

Weighting Weighting::uniform(std::int64_t base) {
  if (base < 2) raise(Errc::bad_base, "uniform weighting base must be >= 2");
  Weighting w;
  w.kind_ = Kind::uniform;
  w.base_ = base;
  w.name_ = "lambda_" + std::to_string(base);
  return w;
}

Weighting Weighting::custom(std::string name,
                            std::function<double(std::span<const digit_t>)> fn, double tol) {
  Weighting w;
  w.kind_ = Kind::custom;
  w.name_ = std::move(name);
  w.fn_ = std::move(fn);
  w.tol_ = tol;
  return w;
}

Rational Weighting::value(std::span<const digit_t> block) const {
  if (kind_ != Kind::uniform)
    raise(Errc::unfeasible, "custom weightings evaluate approximately; use value_approx");
  for (digit_t d : block)
    if (static_cast<std::int64_t>(d) >= base_) return Rational(0);
  return Rational(1, ipow(base_, block.size()));
}

double Weighting::value_approx(std::span<const digit_t> block) const {
  if (kind_ == Kind::uniform) return value(block).convert_to<double>();
  return fn_(block);
}

namespace {

// exact occurrence tables for every m-gram over digits < alphabet, m = 1..k;
// windows containing digits >= alphabet never match any candidate and are
// skipped via the valid-run counter
struct GramTables {
  std::vector<std::vector<std::uint64_t>> counts;  // counts[m-1][code]
  BigInt length;
};

GramTables count_grams(const BlockSource& y, std::int64_t k, std::int64_t alphabet,
                       const NormalityOptions& options) {
  BigInt table_cells = 0;
  BigInt size = 1;
  for (std::int64_t m = 1; m <= k; ++m) {
    size *= alphabet;
    table_cells += size;
  }
  if (table_cells > options.table_budget)
    raise(Errc::unfeasible, "gram tables need " + table_cells.str() + " cells, budget " +
                                std::to_string(options.table_budget));
  if (y.length() > options.scan_budget)
    raise(Errc::unfeasible,
          "stream of length " + y.length().str() + " exceeds scan budget");

  GramTables tables;
  tables.length = y.length();
  std::vector<std::uint64_t> codes(static_cast<std::size_t>(k), 0);
  std::vector<std::uint64_t> modulus(static_cast<std::size_t>(k), 1);
  for (std::int64_t m = 1; m <= k; ++m) {
    std::uint64_t cells = 1;
    for (std::int64_t t = 0; t < m; ++t) cells *= static_cast<std::uint64_t>(alphabet);
    tables.counts.emplace_back(cells, 0);
    modulus[static_cast<std::size_t>(m - 1)] = cells;
  }

  const std::int64_t total = y.length().convert_to<std::int64_t>();
  auto cur = y.cursor(1);
  std::int64_t valid_run = 0;
  const auto ab = static_cast<std::uint64_t>(alphabet);
  for (std::int64_t pos = 1; pos <= total; ++pos) {
    const digit_t d = cur.next();
    if (static_cast<std::int64_t>(d) >= alphabet) {
      valid_run = 0;
      continue;
    }
    ++valid_run;
    for (std::int64_t m = 1; m <= k; ++m) {
      auto& code = codes[static_cast<std::size_t>(m - 1)];
      code = (code * ab + d) % modulus[static_cast<std::size_t>(m - 1)];
      if (valid_run >= m) ++tables.counts[static_cast<std::size_t>(m - 1)][code];
    }
  }
  return tables;
}

std::vector<digit_t> decode(std::uint64_t code, std::int64_t m, std::int64_t alphabet) {
  std::vector<digit_t> digits(static_cast<std::size_t>(m));
  for (std::int64_t p = m - 1; p >= 0; --p) {
    digits[static_cast<std::size_t>(p)] = static_cast<digit_t>(code % alphabet);
    code /= static_cast<std::uint64_t>(alphabet);
  }
  return digits;
}

}  // namespace

NormalityReport check_normality(const BlockSource& y, const Rational& eps, std::int64_t k,
                                const Weighting& mu, std::int64_t alphabet_bound,
                                const NormalityOptions& options) {
  if (eps <= 0 || eps >= 1) raise(Errc::out_of_range, "normality needs 0 < eps < 1");
  if (k < 1) raise(Errc::out_of_range, "normality order k must be >= 1");
  if (alphabet_bound < 2) raise(Errc::bad_base, "alphabet bound must be >= 2");

  const GramTables tables = count_grams(y, k, alphabet_bound, options);
  const BigInt len = tables.length;

  NormalityReport report;
  report.pass = true;
  report.length = len;
  report.max_len_checked = k;
  // violating blocks take precedence in the worst-of report
  double worst_dist = -1.0;
  bool worst_violates = false;

  const bool exact = mu.kind() == Weighting::Kind::uniform;
  for (std::int64_t m = 1; m <= k; ++m) {
    const auto& table = tables.counts[static_cast<std::size_t>(m - 1)];
    for (std::uint64_t code = 0; code < table.size(); ++code) {
      const auto digits = decode(code, m, alphabet_bound);
      const BigInt count(table[code]);
      bool ok;
      double ratio;
      if (exact) {
        const Rational weight = mu.value(digits);
        if (weight == 0) {
          ok = count == 0;
          ratio = ok ? 1.0 : std::numeric_limits<double>::infinity();
        } else {
          const Rational expected = weight * Rational(len);
          ok = Rational(count) >= expected * (1 - eps) && Rational(count) <= expected * (1 + eps);
          ratio = (Rational(count) / expected).convert_to<double>();
        }
      } else {
        const double weight = mu.value_approx(digits);
        const double expected = weight * len.convert_to<double>();
        const double slack = mu.tolerance() * len.convert_to<double>();
        const double cnt = count.convert_to<double>();
        const double e = eps.convert_to<double>();
        if (expected == 0.0) {
          ok = cnt <= slack;
          ratio = ok ? 1.0 : std::numeric_limits<double>::infinity();
        } else {
          ok = cnt >= expected * (1 - e) - slack && cnt <= expected * (1 + e) + slack;
          ratio = cnt / expected;
        }
      }
      const double dist = std::isinf(ratio) ? ratio : std::abs(ratio - 1.0);
      const bool take = !ok ? (!worst_violates || dist > worst_dist)
                            : (!worst_violates && dist > worst_dist);
      if (take) {
        worst_dist = dist;
        worst_violates = !ok;
        report.worst = Block(std::max<std::int64_t>(alphabet_bound, 2), digits);
        report.worst_ratio = ratio;
      }
      if (!ok) report.pass = false;
    }
  }
  return report;
}

NormalityReport check_normality(const Block& y, const Rational& eps, std::int64_t k,
                                const Weighting& mu, std::int64_t alphabet_bound,
                                const NormalityOptions& options) {
  return check_normality(BlockSource::from_block(y), eps, k, mu, alphabet_bound, options);
}

bool is_pb_uniform(const Weighting& mu, std::int64_t p, std::int64_t b, std::int64_t k_max,
                   const Rational& tol, std::int64_t eval_budget) {
  if (p < 1 || p > b) raise(Errc::out_of_range, "need 1 <= p <= b");
  if (k_max < 1) raise(Errc::out_of_range, "k_max must be >= 1");
  BigInt evals = 0;
  BigInt size = 1;
  for (std::int64_t m = 1; m <= k_max; ++m) {
    size *= p;
    evals += size;
  }
  if (evals > eval_budget)
    raise(Errc::unfeasible, "(p,b)-uniformity needs " + evals.str() + " evaluations");

  std::vector<digit_t> digits;
  // iterate all base-p blocks of each length via odometer
  for (std::int64_t m = 1; m <= k_max; ++m) {
    digits.assign(static_cast<std::size_t>(m), 0);
    const Rational expected(1, ipow(b, static_cast<std::uint64_t>(m)));
    while (true) {
      if (mu.kind() == Weighting::Kind::uniform) {
        if (abs(mu.value(digits) - expected) > tol) return false;
      } else {
        const double got = mu.value_approx(digits);
        if (std::abs(got - expected.convert_to<double>()) >
            tol.convert_to<double>() + mu.tolerance())
          return false;
      }
      std::int64_t pos = m - 1;
      while (pos >= 0 && static_cast<std::int64_t>(++digits[static_cast<std::size_t>(pos)]) == p)
        digits[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
    }
  }
  return true;
}

bool check_weighting_consistency(const Weighting& mu, std::int64_t digit_bound,
                                 std::int64_t k_max, const Rational& tol,
                                 std::int64_t eval_budget) {
  if (digit_bound < 1) raise(Errc::out_of_range, "digit bound must be >= 1");
  BigInt evals = 0;
  BigInt size = 1;
  for (std::int64_t m = 1; m <= k_max; ++m) {
    size *= digit_bound;
    evals += size;
  }
  if (evals > eval_budget) raise(Errc::unfeasible, "consistency check exceeds budget");

  // total mass: the length-1 weights must sum to 1 over the declared support
  {
    const std::int64_t reach = std::max(digit_bound, mu.kind() == Weighting::Kind::uniform
                                                         ? mu.base()
                                                         : digit_bound);
    if (mu.kind() == Weighting::Kind::uniform) {
      Rational mass = 0;
      std::vector<digit_t> single(1, 0);
      for (std::int64_t j = 0; j < reach; ++j) {
        single[0] = static_cast<digit_t>(j);
        mass += mu.value(single);
        if (mass > 1 + tol) return false;  // every truncation stays <= 1
      }
      if (abs(mass - 1) > tol) return false;
    } else {
      double mass = 0;
      std::vector<digit_t> single(1, 0);
      for (std::int64_t j = 0; j < reach; ++j) {
        single[0] = static_cast<digit_t>(j);
        mass += mu.value_approx(single);
      }
      if (std::abs(mass - 1.0) > tol.convert_to<double>() + mu.tolerance() * static_cast<double>(reach))
        return false;
    }
  }

  std::vector<digit_t> digits;
  for (std::int64_t m = 1; m < k_max; ++m) {
    digits.assign(static_cast<std::size_t>(m), 0);
    while (true) {
      std::vector<digit_t> extended = digits;
      extended.push_back(0);
      if (mu.kind() == Weighting::Kind::uniform) {
        Rational sum = 0;
        for (std::int64_t j = 0; j < std::max(digit_bound, mu.base()); ++j) {
          extended.back() = static_cast<digit_t>(j);
          sum += mu.value(extended);
        }
        if (abs(mu.value(digits) - sum) > tol) return false;
      } else {
        double sum = 0;
        for (std::int64_t j = 0; j < digit_bound; ++j) {
          extended.back() = static_cast<digit_t>(j);
          sum += mu.value_approx(extended);
        }
        if (std::abs(mu.value_approx(digits) - sum) >
            tol.convert_to<double>() + mu.tolerance() * static_cast<double>(digit_bound))
          return false;
      }
      std::int64_t pos = m - 1;
      while (pos >= 0 &&
             static_cast<std::int64_t>(++digits[static_cast<std::size_t>(pos)]) == digit_bound)
        digits[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
    }
  }
  return true;
}

}  // namespace qnormal
