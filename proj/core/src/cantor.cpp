#include "qnormal/cantor.hpp"

#include "qnormal/error.hpp"

#include <algorithm>

namespace qnormal {

BasicSequence BasicSequence::constant(BigInt base) {
  if (base < 2) raise(Errc::bad_base, "basic sequence entries must be >= 2");
  BasicSequence q;
  q.form_ = Form::constant;
  q.constant_ = std::move(base);
  q.description_ = "const:" + q.constant_.str();
  return q;
}

BasicSequence BasicSequence::from_list(std::vector<BigInt> qs) {
  for (const auto& v : qs)
    if (v < 2) raise(Errc::bad_base, "basic sequence entries must be >= 2");
  BasicSequence q;
  q.form_ = Form::list;
  q.list_ = std::move(qs);
  q.description_ = "explicit[" + std::to_string(q.list_.size()) + "]";
  return q;
}

BasicSequence BasicSequence::from_rule(std::string name,
                                       std::function<BigInt(const BigInt&)> rule) {
  BasicSequence q;
  q.form_ = Form::rule;
  q.rule_ = std::move(rule);
  q.description_ = "rule:" + name;
  return q;
}

BasicSequence BasicSequence::from_runs(std::vector<QRun> runs) {
  BigInt prev_end = 0;
  for (const auto& r : runs) {
    if (r.base < 2) raise(Errc::bad_base, "basic sequence entries must be >= 2");
    if (r.end <= prev_end) raise(Errc::bad_config, "run ends must strictly increase");
    prev_end = r.end;
  }
  BasicSequence q;
  q.form_ = Form::runs;
  q.runs_ = std::move(runs);
  q.description_ = "schedule[" + std::to_string(q.runs_.size()) + " runs]";
  return q;
}

BigInt BasicSequence::at(const BigInt& n) const {
  if (n < 1) raise(Errc::out_of_range, "basic sequence positions start at 1");
  switch (form_) {
    case Form::constant:
      return constant_;
    case Form::list:
      if (n > static_cast<std::int64_t>(list_.size()))
        raise(Errc::undefined_sequence, "q_" + n.str() + " beyond explicit list");
      return list_[(n - 1).convert_to<std::size_t>()];
    case Form::rule: {
      BigInt v = rule_(n);
      if (v < 2) raise(Errc::bad_base, "rule produced q_" + n.str() + " = " + v.str());
      return v;
    }
    case Form::runs: {
      // binary search over run ends
      auto it = std::lower_bound(runs_.begin(), runs_.end(), n,
                                 [](const QRun& r, const BigInt& v) { return r.end < v; });
      if (it == runs_.end())
        raise(Errc::undefined_sequence, "q_" + n.str() + " beyond schedule runs");
      return it->base;
    }
  }
  raise(Errc::internal, "unreachable");
}

bool BasicSequence::defined_through(const BigInt& n) const {
  switch (form_) {
    case Form::constant:
    case Form::rule:
      return true;
    case Form::list:
      return n <= static_cast<std::int64_t>(list_.size());
    case Form::runs:
      return !runs_.empty() && n <= runs_.back().end;
  }
  return false;
}

bool BasicSequence::has_runs() const { return form_ != Form::rule; }

std::vector<QRun> BasicSequence::runs_through(const BigInt& n) const {
  if (!defined_through(n))
    raise(Errc::undefined_sequence, "sequence undefined through " + n.str());
  switch (form_) {
    case Form::constant:
      return {QRun{n, constant_}};
    case Form::list: {
      std::vector<QRun> runs;
      BigInt pos = 0;
      for (const auto& v : list_) {
        if (pos >= n) break;
        if (!runs.empty() && runs.back().base == v)
          runs.back().end = pos + 1;
        else
          runs.push_back(QRun{pos + 1, v});
        ++pos;
      }
      return runs;
    }
    case Form::runs: {
      std::vector<QRun> out;
      for (const auto& r : runs_) {
        out.push_back(r);
        if (r.end >= n) {
          out.back().end = std::min(out.back().end, n);
          break;
        }
      }
      return out;
    }
    case Form::rule:
      raise(Errc::unfeasible, "closed-form rules have no run decomposition");
  }
  raise(Errc::internal, "unreachable");
}

namespace {

// product q_j ... q_{j+k-1}
BigInt window_product(const BasicSequence& q, const BigInt& j, std::int64_t k) {
  BigInt prod = 1;
  for (std::int64_t t = 0; t < k; ++t) prod *= q.at(j + t);
  return prod;
}

Rational grouped_exact_sum(const BasicSequence& q, const BigInt& n, std::int64_t k) {
  const auto runs = q.runs_through(n + k - 1);
  Rational sum = 0;
  BigInt lo = 1;
  for (const auto& run : runs) {
    if (lo > n) break;
    const BigInt hi = run.end;
    const BigInt j_hi = std::min(hi, n);
    // window starts whose whole window lies inside this run
    const BigInt interior_hi = std::min(BigInt(hi - k + 1), j_hi);
    if (interior_hi >= lo)
      sum += Rational(interior_hi - lo + 1, ipow(run.base, static_cast<std::uint64_t>(k)));
    // windows crossing run junctions: at most k-1 per run
    for (BigInt j = std::max(lo, BigInt(interior_hi + 1)); j <= j_hi; ++j)
      sum += Rational(1, window_product(q, j, k));
    lo = hi + 1;
  }
  return sum;
}

}  // namespace

PartialSum q_partial_sum(const BasicSequence& q, const BigInt& n, std::int64_t k, SumMode mode,
                         const SumOptions& options) {
  if (n < 1) raise(Errc::out_of_range, "q_partial_sum requires n >= 1");
  if (k < 1) raise(Errc::out_of_range, "q_partial_sum requires k >= 1");
  if (!q.defined_through(n + k - 1))
    raise(Errc::undefined_sequence,
          "Q must be defined through n+k-1 = " + BigInt(n + k - 1).str());

  PartialSum out;
  out.n = n;
  out.k = k;
  PrecisionGuard guard(options.precision_bits);

  if (mode == SumMode::exact) {
    Rational total;
    if (q.has_runs()) {
      total = grouped_exact_sum(q, n, k);
    } else {
      if (n > options.term_budget)
        raise(Errc::unfeasible, "naive exact summation over " + n.str() + " terms");
      // rolling window product
      BigInt prod = window_product(q, 1, k);
      total = Rational(1, prod);
      for (BigInt j = 2; j <= n; ++j) {
        prod /= q.at(j - 1);
        prod *= q.at(j + k - 1);
        total += Rational(1, prod);
      }
    }
    out.exact = total;
    out.value = to_highfloat(total, options.precision_bits);
    out.error_bound = 0;
    return out;
  }

  // floating mode: compensated summation with a running first-order bound
  const HighFloat unit = ldexp(HighFloat(1), 1 - static_cast<int>(options.precision_bits));
  HighFloat sum = 0, comp = 0, abs_sum = 0;
  auto add_term = [&](const HighFloat& term) {
    const HighFloat y = term - comp;
    const HighFloat t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    abs_sum += term;
  };
  if (q.has_runs()) {
    const auto runs = q.runs_through(n + k - 1);
    BigInt lo = 1;
    for (const auto& run : runs) {
      if (lo > n) break;
      const BigInt j_hi = std::min(run.end, n);
      const BigInt interior_hi = std::min(BigInt(run.end - k + 1), j_hi);
      if (interior_hi >= lo) {
        // NB: mpfr numbers must never be built from cpp_int expression
        // templates (boost 1.74 miscomputes them); materialize first
        const BigInt group_count = interior_hi - lo + 1;
        add_term(HighFloat(group_count) / HighFloat(ipow(run.base, static_cast<std::uint64_t>(k))));
      }
      for (BigInt j = std::max(lo, BigInt(interior_hi + 1)); j <= j_hi; ++j)
        add_term(HighFloat(1) / HighFloat(window_product(q, j, k)));
      lo = run.end + 1;
    }
  } else {
    if (n > options.term_budget)
      raise(Errc::unfeasible, "naive floating summation over " + n.str() + " terms");
    BigInt prod = window_product(q, 1, k);
    add_term(HighFloat(1) / HighFloat(prod));
    for (BigInt j = 2; j <= n; ++j) {
      prod /= q.at(j - 1);
      prod *= q.at(j + k - 1);
      add_term(HighFloat(1) / HighFloat(prod));
    }
  }
  out.value = sum + comp;
  out.error_bound = abs_sum * unit * (k + 4);
  return out;
}

DigitsValueExact digits_to_value_exact(const BasicSequence& q, std::span<const BigInt> digits,
                                       std::size_t n) {
  if (n < 1 || n > digits.size())
    raise(Errc::out_of_range, "digit prefix length outside supplied digits");
  Rational sum = 0;
  BigInt prod = 1;
  for (std::size_t j = 0; j < n; ++j) {
    const BigInt qj = q.at(BigInt(j + 1));
    if (digits[j] < 0 || digits[j] >= qj)
      raise(Errc::digit_out_of_range, "E_" + std::to_string(j + 1) + " = " + digits[j].str() +
                                          " outside [0, q-1] for q = " + qj.str());
    prod *= qj;
    sum += Rational(digits[j], prod);
  }
  return DigitsValueExact{sum, Rational(1, prod)};
}

DigitsValueFloat digits_to_value(const BasicSequence& q, std::span<const BigInt> digits,
                                 std::size_t n, unsigned precision_bits) {
  if (n < 1 || n > digits.size())
    raise(Errc::out_of_range, "digit prefix length outside supplied digits");
  PrecisionGuard guard(precision_bits);
  const HighFloat unit = ldexp(HighFloat(1), 1 - static_cast<int>(precision_bits));
  HighFloat sum = 0, comp = 0, abs_sum = 0;
  BigInt prod = 1;
  for (std::size_t j = 0; j < n; ++j) {
    const BigInt qj = q.at(BigInt(j + 1));
    if (digits[j] < 0 || digits[j] >= qj)
      raise(Errc::digit_out_of_range, "E_" + std::to_string(j + 1) + " out of range");
    prod *= qj;
    const HighFloat term = HighFloat(digits[j]) / HighFloat(prod);
    const HighFloat y = term - comp;
    const HighFloat t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    abs_sum += term;
  }
  DigitsValueFloat out;
  out.value = sum + comp;
  out.tail_bound = HighFloat(1) / HighFloat(prod);
  out.rounding_bound = abs_sum * unit * 6;
  return out;
}

GreedyDigits value_to_digits(const BasicSequence& q, const Rational& x, std::size_t n) {
  if (x < 0 || x >= 1) raise(Errc::out_of_range, "value must lie in [0, 1)");
  GreedyDigits out;
  out.digits.reserve(n);
  Rational rest = x;
  for (std::size_t j = 1; j <= n; ++j) {
    const BigInt qj = q.at(BigInt(j));
    const Rational scaled = rest * Rational(qj);
    const BigInt digit = numerator(scaled) / denominator(scaled);  // floor, scaled >= 0
    out.digits.push_back(digit);
    rest = scaled - Rational(digit);
  }
  out.remainder = rest;
  return out;
}

DivergenceReport k_divergence_report(const BasicSequence& q, std::int64_t k,
                                     std::span<const BigInt> checkpoints,
                                     const SumOptions& options, double plateau_tol) {
  DivergenceReport report;
  report.k = k;
  BigInt prev = 0;
  for (const auto& n : checkpoints) {
    if (n <= prev) raise(Errc::bad_config, "checkpoints must be strictly increasing");
    prev = n;
  }
  const SumMode mode = q.has_runs() ? SumMode::exact : SumMode::floating;
  for (const auto& n : checkpoints) {
    const PartialSum sum = q_partial_sum(q, n, k, mode, options);
    DivergenceRow row;
    row.n = n;
    row.value = sum.value.convert_to<double>();
    row.value_str = sum.exact ? to_decimal_string(*sum.exact) : highfloat_string(sum.value);
    report.rows.push_back(std::move(row));
  }
  bool consistent = !report.rows.empty();
  for (std::size_t t = 1; t < report.rows.size(); ++t) {
    const double prev_v = report.rows[t - 1].value;
    const double cur_v = report.rows[t].value;
    if (!(cur_v > prev_v)) consistent = false;
  }
  if (report.rows.size() >= 2) {
    const double last = report.rows.back().value;
    const double before = report.rows[report.rows.size() - 2].value;
    if (last <= 0 || (last - before) / last < plateau_tol) consistent = false;
  }
  report.divergence_consistent = consistent;
  return report;
}

}  // namespace qnormal
