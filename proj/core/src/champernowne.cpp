#include "qnormal/block_source.hpp"
#include "qnormal/error.hpp"

// Closed-form pattern counting over C_{b,w}.
//
// Positions factor as (word v, offset o): the 1-indexed stream position
// j = v*w + o + 1 reads digit o (0-based, most significant first) of the
// base-b word v in 0..b^w-1. A pattern of length k <= w starts either fully
// inside one word (o + k <= w) or straddles exactly one word boundary, where
// the successor word is determined by v -> v+1. Both cases reduce to counting
// words below a threshold with constraints, which keeps every count exact for
// stream lengths far beyond anything enumerable.

namespace qnormal {

namespace {

// #{0 <= v < upper : the w base-b digits of v match pat at positions
//   [off, off + |pat|)}, digits counted from the most significant.
BigInt count_words_with_window(std::int64_t b, std::int64_t w, std::span<const digit_t> pat,
                               std::int64_t off, BigInt upper) {
  const std::int64_t k = static_cast<std::int64_t>(pat.size());
  if (upper <= 0) return 0;
  const BigInt total_words = ipow(b, static_cast<std::uint64_t>(w));
  if (upper > total_words) upper = total_words;
  if (upper == total_words) return ipow(b, static_cast<std::uint64_t>(w - k));

  // digits of `upper`, most significant first (upper < b^w)
  std::vector<std::int64_t> a(static_cast<std::size_t>(w), 0);
  {
    BigInt rest = upper;
    for (std::int64_t p = w - 1; p >= 0; --p) {
      a[static_cast<std::size_t>(p)] = static_cast<std::int64_t>(rest % b);
      rest /= b;
    }
  }

  // free positions strictly after p that lie outside the fixed window
  std::vector<std::int64_t> free_after(static_cast<std::size_t>(w) + 1, 0);
  for (std::int64_t p = w - 1; p >= 0; --p) {
    const bool in_window = p >= off && p < off + k;
    free_after[static_cast<std::size_t>(p)] =
        free_after[static_cast<std::size_t>(p) + 1] + (in_window ? 0 : 1);
  }

  BigInt total = 0;
  for (std::int64_t p = 0; p < w; ++p) {
    const bool in_window = p >= off && p < off + k;
    const std::int64_t ap = a[static_cast<std::size_t>(p)];
    std::int64_t choices;
    if (in_window) {
      const std::int64_t want = static_cast<std::int64_t>(pat[static_cast<std::size_t>(p - off)]);
      choices = want < ap ? 1 : 0;
    } else {
      choices = ap;
    }
    if (choices > 0)
      total += BigInt(choices) *
               ipow(b, static_cast<std::uint64_t>(free_after[static_cast<std::size_t>(p) + 1]));
    // the tight prefix must keep matching the window to contribute further
    if (in_window &&
        ap != static_cast<std::int64_t>(pat[static_cast<std::size_t>(p - off)]))
      return total;
  }
  return total;
}

// #{v in [lo, hi) : v == c (mod m)}
BigInt count_congruent(const BigInt& lo, const BigInt& hi, const BigInt& c, const BigInt& m) {
  if (hi <= lo) return 0;
  BigInt r0 = (c - lo) % m;
  if (r0 < 0) r0 += m;
  const BigInt first = lo + r0;
  if (first >= hi) return 0;
  return (hi - 1 - first) / m + 1;
}

BigInt word_value(std::span<const digit_t> digits, std::int64_t b) {
  BigInt v = 0;
  for (digit_t d : digits) v = v * b + d;
  return v;
}

}  // namespace

BigInt champernowne_count_fit(std::int64_t b, std::int64_t w, const Block& pattern,
                              const BigInt& j_max) {
  const std::int64_t k = static_cast<std::int64_t>(pattern.size());
  if (k > w) raise(Errc::internal, "champernowne_count_fit requires |pattern| <= width");
  if (j_max <= 0) return 0;
  const auto pat = pattern.digits();
  for (digit_t d : pat)
    if (static_cast<std::int64_t>(d) >= b) return 0;

  const BigInt v_star = (j_max - 1) / w;
  const std::int64_t o_star = static_cast<std::int64_t>((j_max - 1) % w);
  const BigInt total_words = ipow(b, static_cast<std::uint64_t>(w));

  BigInt total = 0;
  for (std::int64_t o = 0; o < w; ++o) {
    // words with an allowed start at offset o: v*w + o + 1 <= j_max
    const BigInt upper = o <= o_star ? BigInt(v_star + 1) : v_star;
    if (upper <= 0) continue;
    if (o + k <= w) {
      total += count_words_with_window(b, w, pat, o, upper);
      continue;
    }
    // straddle: the last t digits of word v, then the first k-t of word v+1
    const std::int64_t t = w - o;
    const std::int64_t r = k - t;
    const BigInt suffix_value = word_value(pat.subspan(0, static_cast<std::size_t>(t)), b);
    const BigInt prefix_value = word_value(pat.subspan(static_cast<std::size_t>(t)), b);
    const BigInt modulus = ipow(b, static_cast<std::uint64_t>(t));
    const BigInt block_of_prefix = ipow(b, static_cast<std::uint64_t>(w - r));
    // v + 1 must have prefix_value as its leading r digits
    BigInt lo = prefix_value * block_of_prefix - 1;
    BigInt hi = lo + block_of_prefix;
    if (lo < 0) lo = 0;
    if (hi > total_words - 1) hi = total_words - 1;  // v+1 must exist
    if (hi > upper) hi = upper;
    total += count_congruent(lo, hi, suffix_value, modulus);
  }
  return total;
}

}  // namespace qnormal
