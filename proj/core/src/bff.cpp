#include "qnormal/bff.hpp"

#include "qnormal/error.hpp"

#include <cmath>

namespace qnormal {

BffSpec::BffSpec(std::function<BffTerm(std::int64_t)> rule, KLimit k_limit, std::string name)
    : rule_(std::move(rule)),
      k_limit_(k_limit),
      name_(std::move(name)),
      state_(std::make_shared<State>()) {}

const BffTerm& BffSpec::term(std::int64_t i) const {
  if (i < 1) raise(Errc::out_of_range, "BFF indices start at 1");
  std::lock_guard lock(state_->mutex);
  auto& cache = state_->cache;
  while (static_cast<std::int64_t>(cache.size()) < i) {
    const auto idx = static_cast<std::int64_t>(cache.size()) + 1;
    BffTerm t = rule_(idx);
    const std::string at = " at i = " + std::to_string(idx);
    if (t.l < 0) raise(Errc::bad_scale, "l_i must be non-negative" + at);
    if (t.b < 2) raise(Errc::bad_base, "b_i must be >= 2" + at);
    if (t.p < 1 || t.p > t.b) raise(Errc::bad_scale, "need 1 <= p_i <= b_i" + at);
    if (t.eps <= 0 || t.eps >= 1) raise(Errc::bad_scale, "eps_i must lie in (0,1)" + at);
    if (t.k < 1) raise(Errc::bad_scale, "k_i must be >= 1" + at);
    if (idx > 1) {
      const BffTerm& prev = cache.back();
      if (t.l < prev.l) raise(Errc::bad_scale, "l_i decreased" + at);
      if (t.b < prev.b) raise(Errc::bad_scale, "b_i decreased" + at);
      if (t.p < prev.p) raise(Errc::bad_scale, "p_i decreased" + at);
      if (t.k < prev.k) raise(Errc::bad_scale, "k_i decreased" + at);
      if (t.eps >= prev.eps)
        raise(Errc::bad_scale, "eps_i must strictly decrease" + at);
    }
    cache.push_back(std::move(t));
  }
  return cache[static_cast<std::size_t>(i - 1)];
}

RangeSet range_set(const BffSpec& spec) {
  RangeSet r;
  r.all_naturals = !spec.k_limit().finite;
  r.max_k = spec.k_limit().value;
  return r;
}

GoodSequence::GoodSequence(std::function<BlockSource(std::int64_t)> source, std::string name) {
  source_ = std::move(source);
  name_ = std::move(name);
}

GoodSequence GoodSequence::from_lengths(std::function<BigInt(std::int64_t)> length,
                                        std::function<double(std::int64_t)> log_length,
                                        std::string name) {
  GoodSequence g;
  g.length_ = std::move(length);
  g.log_length_ = std::move(log_length);
  g.name_ = std::move(name);
  return g;
}

BlockSource GoodSequence::source(std::int64_t i) const {
  if (!source_) raise(Errc::unfeasible, "length-only sequence has no digit sources");
  return source_(i);
}

BigInt GoodSequence::length(std::int64_t i) const {
  if (length_) return length_(i);
  return source_(i).length();
}

double GoodSequence::log_length(std::int64_t i) const {
  if (log_length_) return log_length_(i);
  return log_big(length(i));
}

bool tail_strictly_monotone(std::span<const double> values, bool increasing) {
  const std::size_t count = values.size();
  if (count < 2) return count == 1;
  const std::size_t first = (count + 1) / 2 - 1;  // 0-based start of the last half
  for (std::size_t p = first; p + 1 < count; ++p) {
    if (increasing ? !(values[p] < values[p + 1]) : !(values[p] > values[p + 1])) return false;
  }
  return true;
}

WGoodReport check_w_good(const BffSpec& spec, const GoodSequence& xs, std::int64_t i_max,
                         std::int64_t k) {
  if (i_max < 3) raise(Errc::out_of_range, "check_w_good needs i_max >= 3");
  if (!range_set(spec).contains(k))
    raise(Errc::out_of_range, "k = " + std::to_string(k) + " outside R(W)");

  WGoodReport report;
  report.k = k;
  std::vector<double> r1s, r2s, r3s;

  double prev_log_len = xs.log_length(1);
  for (std::int64_t i = 2; i <= i_max; ++i) {
    const BffTerm& cur = spec.term(i);
    const BffTerm& prev = spec.term(i - 1);
    const double log_len = xs.log_length(i);
    if (log_len < prev_log_len - 1e-12)
      raise(Errc::bad_scale, "|x_i| decreased at i = " + std::to_string(i));
    prev_log_len = log_len;

    WGoodRow row;
    row.i = i;
    const Rational eps_gap = prev.eps - cur.eps;
    if (eps_gap <= 0)
      raise(Errc::degenerate_schedule, "eps_{i-1} - eps_i vanished at i = " + std::to_string(i));
    const double log_b_k = static_cast<double>(k) * std::log(static_cast<double>(cur.b));
    row.log_r1 = log_len - (log_b_k - log_rational(eps_gap));
    r1s.push_back(row.log_r1);

    if (cur.l == 0 && i >= 2)
      raise(Errc::degenerate_schedule, "l_i = 0 at i = " + std::to_string(i));
    if (prev.l > 0) {
      row.has_r2 = true;
      row.log_r2 = (log_big(prev.l) - log_big(cur.l)) + (xs.log_length(i - 1) - log_len) +
                   std::log(static_cast<double>(i)) + log_b_k;
      r2s.push_back(row.log_r2);
    }
    row.has_r3 = true;
    row.log_r3 = -log_big(cur.l) + (xs.log_length(i + 1) - log_len) + log_b_k;
    r3s.push_back(row.log_r3);

    report.rows.push_back(row);
  }

  report.r1_increasing = tail_strictly_monotone(r1s, true);
  report.r2_decreasing = tail_strictly_monotone(r2s, false);
  report.r3_decreasing = tail_strictly_monotone(r3s, false);
  return report;
}

}  // namespace qnormal
