#include "qnormal/analysis.hpp"

#include "qnormal/error.hpp"
#include "qnormal/parallel.hpp"

#include <algorithm>
#include <ostream>
#include <random>

namespace qnormal {

namespace {

Rational inv_pow(std::int64_t base, std::int64_t k) {
  return Rational(1, ipow(base, static_cast<std::uint64_t>(k)));
}

// S at the block-aligned prefix L_j: sum_{t<=j} b_t^-k l_t |x_t|
Rational s_at_block_boundary(const Construction& c, std::int64_t j, std::int64_t k) {
  Rational sum = 0;
  for (std::int64_t t = 1; t <= j; ++t) {
    const BffTerm& term = c.term(t);
    if (term.l == 0) continue;
    sum += Rational(term.l * c.x_length(t)) * inv_pow(term.b, k);
  }
  return sum;
}

}  // namespace

PrefixContext make_context(const Construction& c, std::int64_t k, const BigInt& n) {
  if (k < 1) raise(Errc::out_of_range, "analysis requires k >= 1");
  const PrefixDecomposition d = c.decompose(n);

  PrefixContext ctx;
  ctx.c = &c;
  ctx.k = k;
  ctx.n = n;
  ctx.i = d.i;
  ctx.m = d.m;
  ctx.alpha = d.alpha;
  ctx.beta = d.beta;
  ctx.big_l_im1 = c.cumulative_length(d.i - 1);
  ctx.big_l_i = c.cumulative_length(d.i);
  const BffTerm& ti = c.term(d.i);
  const BffTerm& tn = c.term(d.i + 1);
  ctx.l_i = ti.l;
  ctx.l_ip1 = tn.l;
  ctx.len_i = c.x_length(d.i);
  ctx.len_ip1 = c.x_length(d.i + 1);
  ctx.b_i = ti.b;
  ctx.b_ip1 = tn.b;
  ctx.p_i = ti.p;
  ctx.k_i = ti.k;
  ctx.eps_i = ti.eps;
  ctx.eps_ip1 = tn.eps;
  ctx.s_at_l_im1 = s_at_block_boundary(c, d.i - 1, k);
  ctx.s_at_l_i = ctx.s_at_l_im1 + Rational(ctx.l_i * ctx.len_i) * inv_pow(ctx.b_i, k);
  ctx.s_n = ctx.s_at_l_i + Rational(ctx.m) * inv_pow(ctx.b_ip1, k);
  return ctx;
}

Rational s_partial_sum(const PrefixContext& ctx) { return ctx.s_n; }

Rational kappa(const PrefixContext& ctx) {
  const Rational head = Rational(ctx.big_l_im1) + Rational(ctx.k) * Rational(ctx.l_i + 1) +
                        (1 + ctx.eps_i) * inv_pow(ctx.b_i, ctx.k) * Rational(ctx.l_i * ctx.len_i);
  const Rational per_alpha =
      (1 + ctx.eps_ip1) * inv_pow(ctx.b_ip1, ctx.k) * Rational(ctx.len_ip1) + ctx.k;
  return head + per_alpha * Rational(ctx.alpha) + Rational(ctx.beta);
}

std::int64_t s_min_index(const Construction& c, std::int64_t k) {
  for (std::int64_t t = 1; t <= c.i_cap() + 1; ++t) {
    if (c.x_length(t) > k) return t;
  }
  raise(Errc::out_of_range, "no x_t longer than k within the evaluated schedule");
}

namespace {

Rational q_exact(const Construction& c, const BigInt& n, std::int64_t k) {
  const PartialSum sum = q_partial_sum(c.basic_sequence(), n, k, SumMode::exact);
  return *sum.exact;
}

}  // namespace

SMinusQReport s_minus_q_bound_check(const Construction& c, std::int64_t k,
                                    std::span<const BigInt> checkpoints) {
  SMinusQReport report;
  report.k = k;
  report.s_start = s_min_index(c, k);
  const BigInt l_before = c.cumulative_length(report.s_start - 1);
  if (l_before == 0) {
    report.r = 0;
  } else {
    const PrefixContext ctx = make_context(c, k, l_before);
    report.r = ctx.s_n - q_exact(c, l_before, k);
  }

  report.non_negative = true;
  report.non_decreasing = true;
  report.bounded = true;
  Rational prev_diff = 0;
  bool have_prev = false;
  for (const BigInt& n : checkpoints) {
    const PrefixContext ctx = make_context(c, k, n);
    SMinusQRow row;
    row.n = n;
    row.s = ctx.s_n;
    row.q = q_exact(c, n, k);
    row.diff = row.s - row.q;
    row.bound = report.r + Rational(k) * Rational(ctx.i + 2 - report.s_start);
    row.pass = row.diff >= 0 && row.diff < row.bound;
    if (row.diff < 0) report.non_negative = false;
    if (have_prev && row.diff < prev_diff) report.non_decreasing = false;
    if (!(row.diff < row.bound)) report.bounded = false;
    prev_diff = row.diff;
    have_prev = true;
    report.rows.push_back(std::move(row));
  }
  return report;
}

SegmentBoundsReport check_segment_count_bounds(const Construction& c, std::int64_t k, const BigInt& n,
                              const Block& pattern) {
  if (static_cast<std::int64_t>(pattern.size()) != k)
    raise(Errc::out_of_range, "pattern length must equal k");
  const PrefixContext ctx = make_context(c, k, n);
  SegmentBoundsReport report;
  report.hyp_met = k <= ctx.k_i && pattern.base() <= ctx.p_i;

  const Rational expected_i = inv_pow(ctx.b_i, k) * Rational(ctx.len_i);
  report.xi_lo = (1 - ctx.eps_i) * expected_i;
  report.xi_hi = (1 + ctx.eps_i) * expected_i;
  report.count_xi = c.x(ctx.i).count_fit(pattern);

  const Rational expected_mid =
      inv_pow(ctx.b_ip1, k) * Rational(ctx.alpha) * Rational(ctx.len_ip1);
  report.mid_lo = (1 - ctx.eps_ip1) * expected_mid;
  report.mid_hi = (1 + ctx.eps_ip1) * expected_mid + Rational(ctx.beta) + Rational(k) * Rational(ctx.alpha);
  const ConcatSchedule middle({ScheduleTerm{ctx.l_ip1, c.x(ctx.i + 1)}});
  report.count_mid = count_in_schedule(middle, pattern, ctx.m);

  report.pass = Rational(report.count_xi) >= report.xi_lo &&
                Rational(report.count_xi) <= report.xi_hi &&
                Rational(report.count_mid) >= report.mid_lo &&
                Rational(report.count_mid) <= report.mid_hi;
  return report;
}

PrefixBoundsReport check_prefix_count_bounds(const Construction& c, std::int64_t k, const BigInt& n,
                              const Block& pattern) {
  if (static_cast<std::int64_t>(pattern.size()) != k)
    raise(Errc::out_of_range, "pattern length must equal k");
  const PrefixContext ctx = make_context(c, k, n);
  PrefixBoundsReport report;
  report.hyp_met = k <= ctx.k_i && pattern.base() <= ctx.p_i;
  report.lower = (1 - ctx.eps_i) * inv_pow(ctx.b_i, k) * Rational(ctx.l_i * ctx.len_i) +
                 (1 - ctx.eps_ip1) * inv_pow(ctx.b_ip1, k) * Rational(ctx.alpha * ctx.len_ip1);
  report.upper = kappa(ctx);
  report.count = c.count_prefix(pattern, n);
  report.pass =
      Rational(report.count) >= report.lower && Rational(report.count) <= report.upper;
  return report;
}

FGValues f_g(const PrefixContext& ctx, const BigInt& w, const BigInt& z) {
  if (w < 0 || z < 0) raise(Errc::out_of_range, "f_i and g_i take non-negative arguments");
  const Rational bk = inv_pow(ctx.b_ip1, ctx.k);
  const Rational denom = ctx.s_at_l_i + bk * Rational(ctx.len_ip1) * Rational(w) + bk * Rational(z);
  if (denom <= 0) raise(Errc::internal, "f/g denominator must be positive");
  const Rational f_num = ctx.s_at_l_im1 +
                         ctx.eps_i * inv_pow(ctx.b_i, ctx.k) * Rational(ctx.l_i * ctx.len_i) +
                         ctx.eps_ip1 * bk * Rational(ctx.len_ip1) * Rational(w) + bk * Rational(z);
  const Rational g_num = Rational(ctx.big_l_im1) +
                         ctx.eps_i * inv_pow(ctx.b_i, ctx.k) * Rational(ctx.l_i * ctx.len_i) +
                         Rational(ctx.k) * Rational(ctx.l_i + 1) +
                         (ctx.eps_ip1 * bk * Rational(ctx.len_ip1) + ctx.k) * Rational(w) +
                         Rational(z);
  return FGValues{f_num / denom, g_num / denom};
}

Rational epsilon_prime(const PrefixContext& ctx) {
  const Rational num = Rational(ctx.big_l_im1) +
                       ctx.eps_i * inv_pow(ctx.b_i, ctx.k) * Rational(ctx.l_i * ctx.len_i) +
                       Rational(ctx.k) * Rational(ctx.l_i + 1) + Rational(ctx.len_ip1);
  const Rational den = ctx.s_at_l_i + inv_pow(ctx.b_ip1, ctx.k) * Rational(ctx.len_ip1);
  return num / den;
}

EnvelopeGridReport check_envelope_grid(const Construction& c, std::int64_t k, std::int64_t i,
                              const GridSpec& grid) {
  if (i < 1 || i > c.i_cap())
    raise(Errc::out_of_range, "envelope grid check needs 1 <= i <= i_cap");
  EnvelopeGridReport report;
  if (c.term(i).l == 0 || c.cumulative_length(i) == 0) {
    report.verdict = CheckVerdict::hypothesis_unmet;
    report.detail = "l_i = 0 at i = " + std::to_string(i);
    return report;
  }
  const PrefixContext ctx = make_context(c, k, c.cumulative_length(i));
  report.bound = f_g(ctx, 0, ctx.len_ip1).g;

  if (!(ctx.len_i > 4 * k) ||
      !(Rational(ctx.len_ip1) > Rational(k) * Rational(ipow(ctx.b_ip1, static_cast<std::uint64_t>(k))) /
                                    (ctx.eps_i - ctx.eps_ip1))) {
    report.verdict = CheckVerdict::hypothesis_unmet;
    report.detail = "hypotheses unmet at i = " + std::to_string(i);
    return report;
  }

  const BigInt w_max = ctx.l_ip1;
  const BigInt z_max = ctx.len_ip1 - 1;
  std::vector<BigInt> ws{0, w_max};
  std::vector<BigInt> zs{0, z_max};
  if (w_max >= 1) ws.push_back(1);
  if (w_max >= 2) ws.push_back(w_max - 1);
  if (z_max >= 1) zs.push_back(1);
  if (z_max >= 2) zs.push_back(z_max - 1);
  std::mt19937_64 rng(grid.seed);
  auto random_in = [&rng](const BigInt& hi) {  // uniform-ish in [0, hi]
    if (hi <= 0) return BigInt(0);
    const std::uint64_t r = rng();
    return BigInt(r) % (hi + 1);
  };
  for (int t = 0; t < grid.per_axis; ++t) {
    ws.push_back(random_in(w_max));
    zs.push_back(random_in(z_max));
  }
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());

  for (const BigInt& w : ws) {
    for (const BigInt& z : zs) {
      const Rational g = f_g(ctx, w, z).g;
      if (!(g < report.bound)) {
        report.verdict = CheckVerdict::fail;
        report.detail = "g_i(" + w.str() + "," + z.str() + ") not below g_i(0,|x_{i+1}|)";
        return report;
      }
      if (w < w_max) {
        const Rational g_next = f_g(ctx, w + 1, z).g;
        if (!(g_next < g)) {
          report.verdict = CheckVerdict::fail;
          report.detail = "g_i not decreasing in w at (" + w.str() + "," + z.str() + ")";
          return report;
        }
      }
      if (z < z_max) {
        const Rational g_next = f_g(ctx, w, z + 1).g;
        if (!(g_next > g)) {
          report.verdict = CheckVerdict::fail;
          report.detail = "g_i not increasing in z at (" + w.str() + "," + z.str() + ")";
          return report;
        }
      }
      // f_i shares g_i's denominator with a strictly smaller numerator
      const FGValues fg = f_g(ctx, w, z);
      if (!(fg.f < fg.g)) {
        report.verdict = CheckVerdict::fail;
        report.detail = "f_i not below g_i at (" + w.str() + "," + z.str() + ")";
        return report;
      }
    }
  }
  report.verdict = CheckVerdict::pass;
  return report;
}

EpsilonPrimeTrend epsilon_prime_trend(const Construction& c, std::int64_t k, std::int64_t i_lo,
                                      std::int64_t i_hi) {
  if (i_lo < 1 || i_hi < i_lo) raise(Errc::out_of_range, "bad i range");
  if (i_hi > c.i_cap())
    raise(Errc::out_of_range, "epsilon_prime trend needs i_hi <= i_cap");
  EpsilonPrimeTrend trend;
  trend.k = k;
  trend.copy_overhead_all_ok = true;
  std::vector<double> logs;
  for (std::int64_t i = i_lo; i <= i_hi; ++i) {
    EpsilonPrimeRow row;
    row.i = i;
    const BffTerm& t = c.term(i);
    if (t.l == 0) {
      row.defined = false;  // skipped with notice: ratios undefined at l_i = 0
      trend.rows.push_back(row);
      continue;
    }
    const PrefixContext ctx = make_context(c, k, c.cumulative_length(i));
    row.defined = true;
    const Rational ep = epsilon_prime(ctx);
    row.log_eps_prime = log_rational(ep);
    logs.push_back(row.log_eps_prime);

    const Rational denom = inv_pow(ctx.b_i, k) * Rational(ctx.l_i * ctx.len_i);
    const Rational overhead = Rational(k) * Rational(ctx.l_i + 1) / denom;
    row.log_copy_overhead_ratio = log_rational(overhead);
    const Rational overhead_bound =
        Rational(2 * k) * Rational(ipow(ctx.b_i, static_cast<std::uint64_t>(k))) / Rational(ctx.len_i);
    row.copy_overhead_bound_ok = overhead <= overhead_bound;
    if (!row.copy_overhead_bound_ok) trend.copy_overhead_all_ok = false;

    BigInt head = 0;
    for (std::int64_t j = 1; j <= i - 2; ++j) head += c.term(j).l * c.x_length(j);
    row.log_early_mass_ratio = head == 0 ? -std::numeric_limits<double>::infinity()
                                      : log_rational(Rational(head) / denom);
    trend.rows.push_back(row);
  }
  trend.tail_decreasing = tail_strictly_monotone(logs, false);
  return trend;
}

namespace {

bool envelope_hypotheses(const PrefixContext& ctx, const Block& block, const Rational& q) {
  if (q <= 0) return false;
  if (!(ctx.s_n / q < 2)) return false;
  if (!(ctx.k <= ctx.k_i)) return false;
  if (!(block.base() <= ctx.p_i)) return false;
  // the grid hypotheses back the eps_i' form of the envelope
  if (!(ctx.len_i > 4 * ctx.k)) return false;
  if (ctx.l_i <= 0) return false;
  if (!(Rational(ctx.len_ip1) >
        Rational(ctx.k) * Rational(ipow(ctx.b_ip1, static_cast<std::uint64_t>(ctx.k))) /
            (ctx.eps_i - ctx.eps_ip1)))
    return false;
  return true;
}

}  // namespace

DiscrepancyReport discrepancy_sweep(const Construction& c, std::span<const Block> blocks,
                                    std::int64_t k, std::span<const BigInt> checkpoints,
                                    int threads) {
  for (const Block& b : blocks)
    if (static_cast<std::int64_t>(b.size()) != k)
      raise(Errc::out_of_range, "every swept block must have length k");
  BigInt prev = 0;
  for (const BigInt& n : checkpoints) {
    if (n <= prev) raise(Errc::bad_config, "checkpoints must be strictly increasing");
    prev = n;
  }

  DiscrepancyReport report;
  report.k = k;
  report.rows.resize(checkpoints.size() * blocks.size());
  parallel_for(report.rows.size(), threads, [&](std::size_t cell) {
    const std::size_t ci = cell / blocks.size();
    const std::size_t bi = cell % blocks.size();
    const BigInt& n = checkpoints[ci];
    const Block& block = blocks[bi];
    const PrefixContext ctx = make_context(c, k, n);

    DiscrepancyRow row;
    row.n = n;
    row.block = block;
    row.count = c.count_prefix(block, n);
    row.q = q_exact(c, n, k);
    row.ratio = row.q > 0 ? Rational(row.count) / row.q : Rational(0);
    row.abs_err = abs(row.ratio - 1);
    row.eps_prime = epsilon_prime(ctx);
    row.smq_over_s = ctx.s_n > 0 ? (ctx.s_n - row.q) / ctx.s_n : Rational(0);
    row.envelope = 2 * row.eps_prime + row.smq_over_s;
    row.hyp_met = envelope_hypotheses(ctx, block, row.q);
    row.pre_asymptotic = row.count == 0;
    row.pass = row.abs_err < row.envelope;
    report.rows[cell] = std::move(row);
  });

  report.all_pass = true;
  for (const auto& row : report.rows)
    if (row.hyp_met && !row.pass) report.all_pass = false;
  return report;
}

void DiscrepancyReport::write_csv(std::ostream& os) const {
  os << "n,block,N,Q,ratio,abs_err,eps_prime,s_minus_q_over_s,envelope,pass\n";
  for (const auto& row : rows) {
    os << row.n.str() << ',' << row.block.csv_str() << ',' << row.count.str() << ','
       << to_decimal_string(row.q) << ',' << to_decimal_string(row.ratio) << ','
       << to_decimal_string(row.abs_err) << ',' << to_decimal_string(row.eps_prime) << ','
       << to_decimal_string(row.smq_over_s) << ',' << to_decimal_string(row.envelope) << ',';
    if (!row.hyp_met)
      os << (row.pre_asymptotic ? "pre" : "skip");
    else
      os << (row.pass ? "pass" : "fail");
    os << '\n';
  }
}

ChampernowneCountReport verify_champernowne_counting(std::int64_t b_max, std::int64_t w_max,
                                                   std::int64_t budget, int threads) {
  if (b_max < 2 || w_max < 1) raise(Errc::out_of_range, "need b_max >= 2, w_max >= 1");
  std::vector<std::pair<std::int64_t, std::int64_t>> cells;
  for (std::int64_t b = 2; b <= b_max; ++b)
    for (std::int64_t w = 1; w <= w_max; ++w) {
      const BigInt len = BigInt(w) * ipow(b, static_cast<std::uint64_t>(w));
      if (len > budget)
        raise(Errc::unfeasible, "C_{" + std::to_string(b) + "," + std::to_string(w) +
                                    "} has " + len.str() + " digits, over budget");
      cells.emplace_back(b, w);
    }

  struct CellResult {
    std::int64_t cases = 0;
    std::vector<std::string> failures;
  };
  std::vector<CellResult> results(cells.size());

  parallel_for(cells.size(), threads, [&](std::size_t idx) {
    const auto [b, w] = cells[idx];
    auto& out = results[idx];
    const BlockSource source = champernowne_block(b, w);
    const BigInt n = source.length();

    // one streamed pass collects every k-gram count for k = 1..w
    std::vector<std::vector<BigInt>> counts(static_cast<std::size_t>(w));
    {
      std::vector<std::uint64_t> grams;
      std::vector<std::uint64_t> codes(static_cast<std::size_t>(w), 0);
      std::vector<std::uint64_t> mods(static_cast<std::size_t>(w));
      for (std::int64_t m = 1; m <= w; ++m) {
        std::uint64_t cellsz = 1;
        for (std::int64_t t = 0; t < m; ++t) cellsz *= static_cast<std::uint64_t>(b);
        counts[static_cast<std::size_t>(m - 1)].assign(cellsz, 0);
        mods[static_cast<std::size_t>(m - 1)] = cellsz;
      }
      auto cur = source.cursor(1);
      const std::int64_t total = n.convert_to<std::int64_t>();
      for (std::int64_t pos = 1; pos <= total; ++pos) {
        const digit_t d = cur.next();
        for (std::int64_t m = 1; m <= w; ++m) {
          auto& code = codes[static_cast<std::size_t>(m - 1)];
          code = (code * static_cast<std::uint64_t>(b) + d) % mods[static_cast<std::size_t>(m - 1)];
          if (pos >= m) ++counts[static_cast<std::size_t>(m - 1)][code];
        }
      }
    }

    for (std::int64_t k = 1; k <= w; ++k) {
      const BigInt lower = BigInt(w - k + 1) * ipow(b, static_cast<std::uint64_t>(w - k));
      const BigInt upper = BigInt(w) * ipow(b, static_cast<std::uint64_t>(w - k));
      const auto& table = counts[static_cast<std::size_t>(k - 1)];
      for (std::uint64_t code = 0; code < table.size(); ++code) {
        ++out.cases;
        const BigInt& count = table[code];
        if (count < lower || count > upper)
          out.failures.push_back("count bounds fail for b=" + std::to_string(b) +
                                 " w=" + std::to_string(w) + " k=" + std::to_string(k) +
                                 " code=" + std::to_string(code) + " N=" + count.str());
        // the closed-form counter must reproduce the streamed tally exactly
        std::vector<digit_t> digits(static_cast<std::size_t>(k));
        std::uint64_t rest = code;
        for (std::int64_t p = k - 1; p >= 0; --p) {
          digits[static_cast<std::size_t>(p)] = static_cast<digit_t>(rest % b);
          rest /= static_cast<std::uint64_t>(b);
        }
        const Block pattern(b, digits);
        if (champernowne_count_fit(b, w, pattern, n - k + 1) != count)
          out.failures.push_back("closed-form disagreement for b=" + std::to_string(b) +
                                 " w=" + std::to_string(w) + " pattern=" + pattern.str());
      }
    }

    // (eps = K/w, K, lambda_b)-normality for every K < w
    for (std::int64_t K = 1; K < w; ++K) {
      const Rational eps(K, w);
      for (std::int64_t m = 1; m <= K; ++m) {
        const Rational expected = Rational(n) * inv_pow(b, m);
        const Rational lo = expected * (1 - eps);
        const Rational hi = expected * (1 + eps);
        const auto& table = counts[static_cast<std::size_t>(m - 1)];
        for (std::uint64_t code = 0; code < table.size(); ++code) {
          ++out.cases;
          const Rational count(table[code]);
          if (count < lo || count > hi)
            out.failures.push_back("normality fails for b=" + std::to_string(b) +
                                   " w=" + std::to_string(w) + " K=" + std::to_string(K) +
                                   " m=" + std::to_string(m) + " code=" + std::to_string(code));
        }
      }
    }
  });

  ChampernowneCountReport report;
  for (const auto& r : results) {
    report.cases += r.cases;
    report.failures += static_cast<std::int64_t>(r.failures.size());
    for (const auto& f : r.failures)
      if (report.failure_details.size() < 32) report.failure_details.push_back(f);
  }
  return report;
}

}  // namespace qnormal
