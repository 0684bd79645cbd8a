#include "qnormal/schedule.hpp"

#include "qnormal/error.hpp"

#include <algorithm>

namespace qnormal {

ConcatSchedule::ConcatSchedule(std::vector<ScheduleTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.multiplicity < 0) raise(Errc::out_of_range, "negative term multiplicity");
    length_ += t.multiplicity * t.source.length();
    max_base_ = std::max(max_base_, t.source.base());
  }
}

digit_t ConcatSchedule::digit(const BigInt& pos) const {
  if (pos < 1 || pos > length_) raise(Errc::out_of_range, "digit position outside schedule");
  BigInt off = 0;
  for (const auto& t : terms_) {
    const BigInt region = t.multiplicity * t.source.length();
    if (pos <= off + region) {
      const BigInt local = pos - off;                        // 1-indexed within region
      const BigInt in_copy = (local - 1) % t.source.length() + 1;
      return t.source.digit(in_copy);
    }
    off += region;
  }
  raise(Errc::internal, "schedule digit walk exhausted terms");
}

std::vector<digit_t> ConcatSchedule::window(const BigInt& from, std::size_t count) const {
  if (count == 0) return {};
  if (from < 1 || from + count - 1 > length_) raise(Errc::out_of_range, "window outside schedule");
  std::vector<digit_t> out;
  out.reserve(count);
  BigInt off = 0;
  std::size_t term_idx = 0;
  // locate the term containing `from`
  while (term_idx < terms_.size()) {
    const BigInt region = terms_[term_idx].multiplicity * terms_[term_idx].source.length();
    if (from <= off + region) break;
    off += region;
    ++term_idx;
  }
  BigInt pos = from;
  while (out.size() < count && term_idx < terms_.size()) {
    const auto& t = terms_[term_idx];
    const BigInt region = t.multiplicity * t.source.length();
    if (region == 0 || pos > off + region) {
      off += region;
      ++term_idx;
      continue;
    }
    const BigInt local = pos - off;
    BigInt in_copy = (local - 1) % t.source.length() + 1;
    auto cur = t.source.cursor(in_copy);
    while (out.size() < count && pos <= off + region) {
      out.push_back(cur.next());
      ++pos;
      ++in_copy;
      if (in_copy > t.source.length()) {
        in_copy = 1;
        cur = t.source.cursor(1);
      }
    }
    if (pos > off + region) {
      off += region;
      ++term_idx;
    }
  }
  return out;
}

ConcatSchedule concat(std::vector<std::pair<BigInt, Block>> terms) {
  std::vector<ScheduleTerm> out;
  out.reserve(terms.size());
  for (auto& [mult, block] : terms)
    out.push_back(ScheduleTerm{mult, BlockSource::from_block(std::move(block))});
  return ConcatSchedule(std::move(out));
}

Block materialize(const ConcatSchedule& schedule, const BigInt& limit) {
  if (schedule.length() > limit)
    raise(Errc::too_long, "represented length " + schedule.length().str() + " exceeds limit " +
                              limit.str());
  if (schedule.length() == 0)
    raise(Errc::empty_block, "cannot materialize an empty schedule");
  auto digits = schedule.window(1, schedule.length().convert_to<std::size_t>());
  return Block(schedule.max_base(), std::move(digits));
}

namespace {

// matches of `pat` against the periodic repetition of `src` starting at local
// position p (1-indexed); valid only while the occurrence stays inside copies
// of the same source.
bool matches_periodic(const BlockSource& src, std::span<const digit_t> pat, const BigInt& p) {
  const BigInt len = src.length();
  for (std::size_t t = 0; t < pat.size(); ++t) {
    const BigInt pos = (p - 1 + t) % len + 1;
    if (src.digit(pos) != pat[t]) return false;
  }
  return true;
}

bool matches_at(const ConcatSchedule& schedule, std::span<const digit_t> pat, const BigInt& q) {
  const auto window = schedule.window(q, pat.size());
  return std::equal(window.begin(), window.end(), pat.begin(), pat.end());
}

}  // namespace

BigInt count_starts_within(const ConcatSchedule& schedule, const Block& pattern, const BigInt& n) {
  const std::int64_t k = static_cast<std::int64_t>(pattern.size());
  if (n <= 0) return 0;
  if (n + k - 1 > schedule.length())
    raise(Errc::out_of_range, "count_starts_within needs digits through n+k-1");
  const auto pat = pattern.digits();

  BigInt total = 0;
  BigInt off = 0;
  for (const auto& term : schedule.terms()) {
    if (term.multiplicity == 0) continue;
    const BigInt len = term.source.length();
    const BigInt region = term.multiplicity * len;
    if (off + 1 > n) break;
    const BigInt starts_here = std::min(region, BigInt(n - off));  // local starts 1..starts_here

    const BigInt full_copies = starts_here / len;
    const BigInt rem = starts_here % len;
    const BigInt interior_per_copy = len >= k ? len - k + 1 : BigInt(0);

    // (1) occurrences inside a single copy
    if (interior_per_copy > 0) {
      if (full_copies > 0) total += full_copies * term.source.count_fit(pattern);
      if (rem > 0) total += term.source.count_prefix_fit(pattern, std::min(rem, interior_per_copy));
    }

    // (2) crossing starts: the last min(k-1, len) positions of each copy
    if (k > 1) {
      const BigInt cross_lo = interior_per_copy + 1;
      if (cross_lo <= len) {
        const BigInt span_extra = ceil_div(BigInt(k - 1), len);  // extra copies touched
        // copies whose crossing occurrences stay inside this term's region and
        // whose starts all fall at or before n: periodic, counted in bulk
        BigInt bulk = std::min(full_copies, BigInt(term.multiplicity - span_extra));
        if (bulk < 0) bulk = 0;
        if (bulk > 0) {
          BigInt intra_matches = 0;
          for (BigInt p = cross_lo; p <= len; ++p)
            if (matches_periodic(term.source, pat, p)) ++intra_matches;
          total += bulk * intra_matches;
        }
        // remaining copies with starts <= n: individually, reading the
        // virtual stream (continuation may enter later terms)
        const BigInt last_copy = ceil_div(starts_here, len);
        for (BigInt c = bulk + 1; c <= last_copy; ++c) {
          const BigInt p_hi = std::min(len, BigInt(starts_here - (c - 1) * len));
          for (BigInt p = cross_lo; p <= p_hi; ++p) {
            const BigInt q = off + (c - 1) * len + p;
            if (matches_at(schedule, pat, q)) ++total;
          }
        }
      }
    }

    off += region;
    if (off >= n) break;
  }
  return total;
}

BigInt count_in_schedule(const ConcatSchedule& schedule, const Block& pattern, const BigInt& n) {
  if (n < 0) raise(Errc::out_of_range, "count_in_schedule requires n >= 0");
  if (n > schedule.length())
    raise(Errc::out_of_range, "n = " + n.str() + " exceeds represented length " +
                                  schedule.length().str());
  const BigInt fit_cap = schedule.length() - static_cast<std::int64_t>(pattern.size()) + 1;
  const BigInt effective = std::min(n, fit_cap);
  if (effective <= 0) return 0;
  return count_starts_within(schedule, pattern, effective);
}

}  // namespace qnormal
