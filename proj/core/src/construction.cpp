#include "qnormal/construction.hpp"

#include "qnormal/error.hpp"

#include <cmath>

namespace qnormal {

Construction::Construction(BffSpec spec, GoodSequence xs, std::int64_t i_cap,
                           const ConstructionOptions& options, bool canonical, std::string name)
    : spec_(std::move(spec)),
      xs_(std::move(xs)),
      i_cap_(i_cap),
      canonical_(canonical),
      name_(std::move(name)) {
  if (i_cap_ < 2) raise(Errc::bad_scale, "constructions need i_cap >= 2");

  cum_len_.push_back(BigInt(0));  // L_0
  std::vector<ScheduleTerm> terms;
  for (std::int64_t i = 1; i <= i_cap_ + 1; ++i) {
    const BffTerm& t = spec_.term(i);  // validates the BFF chain eagerly
    const BigInt len = xs_.length(i);
    if (len < 1) raise(Errc::bad_scale, "|x_i| must be >= 1 at i = " + std::to_string(i));
    if (i >= 2 && len < x_len_.back())
      raise(Errc::bad_scale, "|x_i| decreased at i = " + std::to_string(i));
    x_len_.push_back(len);
    if (i > i_cap_) break;
    cum_len_.push_back(cum_len_.back() + t.l * len);
    if (xs_.has_sources()) {
      BlockSource src = xs_.source(i);
      if (src.length() != len)
        raise(Errc::internal, "declared |x_i| disagrees with source at i = " + std::to_string(i));
      if (src.base() > t.b)
        raise(Errc::bad_scale, "x_i digits may reach " + std::to_string(src.base() - 1) +
                                   " >= b_i at i = " + std::to_string(i));
      terms.push_back(ScheduleTerm{t.l, std::move(src)});
    }
  }
  full_ = ConcatSchedule(std::move(terms));

  std::vector<QRun> runs;
  for (std::int64_t i = 1; i <= i_cap_; ++i) {
    if (cum_len_[static_cast<std::size_t>(i)] == cum_len_[static_cast<std::size_t>(i - 1)])
      continue;  // l_i = 0 contributes no run
    runs.push_back(QRun{cum_len_[static_cast<std::size_t>(i)], BigInt(spec_.term(i).b)});
  }
  if (!runs.empty()) q_ = BasicSequence::from_runs(std::move(runs));

  if (options.validate_normality && xs_.has_sources()) {
    NormalityOptions nopt;
    nopt.scan_budget = options.normality_scan_budget;
    nopt.table_budget = options.normality_table_budget;
    for (std::int64_t i = 1; i <= i_cap_; ++i) {
      if (x_len_[static_cast<std::size_t>(i - 1)] > options.normality_scan_budget) continue;
      const BffTerm& t = spec_.term(i);
      // depth limited by the table budget; the skipped depths are reported
      // through check_normality's own budget error if forced
      std::int64_t depth = t.k;
      while (depth > 1) {
        BigInt cells = 0, size = 1;
        for (std::int64_t m = 1; m <= depth; ++m) {
          size *= t.b;
          cells += size;
        }
        if (cells <= nopt.table_budget) break;
        --depth;
      }
      const auto report = check_normality(xs_.source(i), t.eps, depth, t.mu, t.b, nopt);
      if (!report.pass)
        raise(Errc::bad_scale,
              "x_" + std::to_string(i) + " is not (eps_i, k_i, mu_i)-normal; worst block " +
                  (report.worst ? report.worst->str() : std::string("?")) + " ratio " +
                  std::to_string(report.worst_ratio));
    }
  }
}

const BigInt& Construction::x_length(std::int64_t i) const {
  if (i < 1 || i > i_cap_ + 1) raise(Errc::out_of_range, "x index outside evaluated range");
  return x_len_[static_cast<std::size_t>(i - 1)];
}

BlockSource Construction::x(std::int64_t i) const { return xs_.source(i); }

const BigInt& Construction::cumulative_length(std::int64_t i) const {
  if (i < 0 || i > i_cap_) raise(Errc::out_of_range, "L_i defined for 0 <= i <= i_cap");
  return cum_len_[static_cast<std::size_t>(i)];
}

PrefixDecomposition Construction::decompose(const BigInt& n) const {
  if (n < 1) raise(Errc::out_of_range, "decompose requires n >= 1");
  if (n > total_length())
    raise(Errc::out_of_range, "n = " + n.str() + " beyond L_{i_cap} = " + total_length().str() +
                                  "; raise i_cap");
  // largest i with L_i <= n
  std::int64_t i = 1;
  for (std::int64_t j = i_cap_; j >= 1; --j) {
    if (cum_len_[static_cast<std::size_t>(j)] <= n) {
      i = j;
      break;
    }
  }
  PrefixDecomposition d;
  d.i = i;
  d.m = n - cum_len_[static_cast<std::size_t>(i)];
  if (d.m == 0) {
    d.alpha = 0;
    d.beta = 0;
  } else {
    const BigInt& next_len = x_length(i + 1);
    d.alpha = d.m / next_len;
    d.beta = d.m % next_len;
  }
  return d;
}

ConcatSchedule Construction::prefix_schedule(const BigInt& digits) const {
  if (digits > total_length())
    raise(Errc::out_of_range,
          "prefix of " + digits.str() + " digits exceeds L_{i_cap}; raise i_cap");
  std::vector<ScheduleTerm> terms;
  BigInt off = 0;
  for (std::int64_t i = 1; i <= i_cap_ && off < digits; ++i) {
    const BffTerm& t = spec_.term(i);
    if (t.l == 0) continue;
    BlockSource src = xs_.source(i);
    const BigInt region = t.l * src.length();
    if (off + region <= digits) {
      terms.push_back(ScheduleTerm{t.l, src});
      off += region;
      continue;
    }
    const BigInt remaining = digits - off;
    const BigInt full_copies = remaining / src.length();
    const BigInt tail = remaining % src.length();
    if (full_copies > 0) terms.push_back(ScheduleTerm{full_copies, src});
    if (tail > 0) {
      if (tail > 10'000'000)
        raise(Errc::unfeasible, "prefix schedule would materialize a cut block of " + tail.str() +
                                    " digits; use count_prefix/digit_stream instead");
      auto digits_vec = src.window(1, tail.convert_to<std::size_t>());
      terms.push_back(
          ScheduleTerm{BigInt(1), BlockSource::from_block(Block(src.base(), std::move(digits_vec)))});
    }
    off = digits;
  }
  return ConcatSchedule(std::move(terms));
}

std::vector<digit_t> Construction::digit_stream(const BigInt& from, std::size_t count) const {
  if (count == 0) return {};
  if (from < 1) raise(Errc::out_of_range, "digit positions start at 1");
  if (from + count - 1 > total_length())
    raise(Errc::out_of_range, "digit window extends past L_{i_cap}; raise i_cap");
  return full_.window(from, count);
}

BigInt Construction::count_prefix(const Block& pattern, const BigInt& n) const {
  if (n < 1) return 0;
  const std::int64_t k = static_cast<std::int64_t>(pattern.size());
  if (n + k - 1 > total_length())
    raise(Errc::out_of_range, "counting through n+k-1 = " + BigInt(n + k - 1).str() +
                                  " needs digits past L_{i_cap}; raise i_cap");
  return count_starts_within(full_, pattern, n);
}

Construction canonical_instance(std::int64_t i_cap, const ScaleOverrides& overrides,
                                  const ConstructionOptions& options) {
  if (i_cap < 2) raise(Errc::bad_scale, "canonical schedule needs i_cap >= 2");
  const bool canonical = !overrides.l_rule && !overrides.w_rule && !overrides.x1;

  auto l_of = overrides.l_rule
                  ? overrides.l_rule
                  : [](std::int64_t i) { return ipow(i, static_cast<std::uint64_t>(3 * i)); };
  auto w_of = overrides.w_rule ? overrides.w_rule : [](std::int64_t i) { return i * i; };
  const Block x1 = overrides.x1 ? *overrides.x1 : Block(2, {0, 1});

  auto rule = [l_of](std::int64_t i) -> BffTerm {
    if (i == 1) return BffTerm{BigInt(0), 2, 2, Rational(3, 5), 1, Weighting::uniform(2)};
    return BffTerm{l_of(i), i, i, Rational(1, i), i, Weighting::uniform(i)};
  };

  auto source = [w_of, x1](std::int64_t i) -> BlockSource {
    if (i == 1) return BlockSource::from_block(x1);
    return BlockSource::champernowne(i, w_of(i));
  };

  std::string name = "thm4.1";
  if (!canonical) {
    name += "-scaled";
  }

  BffSpec spec(rule, KLimit::infinite(), name);
  GoodSequence xs(source, name);
  try {
    return Construction(std::move(spec), std::move(xs), i_cap, options, canonical, name);
  } catch (const Error& e) {
    if (!canonical && e.code() != Errc::bad_scale)
      raise(Errc::bad_scale, std::string("scale overrides rejected: ") + e.what());
    throw;
  }
}

}  // namespace qnormal
