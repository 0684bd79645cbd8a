#include "doctest.h"

#include "qnormal/block_source.hpp"
#include "qnormal/error.hpp"

#include <random>

using namespace qnormal;

namespace {

// reference: scan the materialized stream
BigInt brute_count(const std::vector<digit_t>& stream, const Block& pattern, std::int64_t j_max) {
  const std::int64_t k = static_cast<std::int64_t>(pattern.size());
  const auto pat = pattern.digits();
  BigInt count = 0;
  const std::int64_t fit = static_cast<std::int64_t>(stream.size()) - k + 1;
  for (std::int64_t j = 1; j <= std::min(j_max, fit); ++j) {
    bool ok = true;
    for (std::int64_t t = 0; t < k; ++t)
      if (stream[static_cast<std::size_t>(j - 1 + t)] != pat[static_cast<std::size_t>(t)]) {
        ok = false;
        break;
      }
    if (ok) ++count;
  }
  return count;
}

std::vector<Block> all_blocks(std::int64_t base, std::int64_t len) {
  std::vector<Block> out;
  std::vector<digit_t> digits(static_cast<std::size_t>(len), 0);
  while (true) {
    out.emplace_back(base, digits);
    std::int64_t pos = len - 1;
    while (pos >= 0 && static_cast<std::int64_t>(++digits[static_cast<std::size_t>(pos)]) == base)
      digits[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
  return out;
}

}  // namespace

TEST_CASE("closed-form Champernowne counts match brute force exhaustively") {
  for (std::int64_t b = 2; b <= 3; ++b) {
    for (std::int64_t w = 1; w <= 4; ++w) {
      const BlockSource source = champernowne_block(b, w);
      const auto len = source.length().convert_to<std::int64_t>();
      const auto stream = source.window(1, static_cast<std::size_t>(len));
      for (std::int64_t k = 1; k <= w; ++k) {
        for (const Block& pattern : all_blocks(b, k)) {
          // every prefix cutoff, including the full-stream case
          for (std::int64_t j_max : {std::int64_t(0), std::int64_t(1), len / 3, len / 2,
                                     len - k, len - k + 1, len}) {
            if (j_max < 0) continue;
            const BigInt got = champernowne_count_fit(b, w, pattern, j_max);
            const BigInt want = brute_count(stream, pattern, j_max);
            CAPTURE(b);
            CAPTURE(w);
            CAPTURE(j_max);
            CAPTURE(pattern.str());
            REQUIRE(got == want);
          }
        }
      }
    }
  }
}

TEST_CASE("closed-form counts match brute force at every cutoff for C_{3,3}") {
  const std::int64_t b = 3, w = 3;
  const BlockSource source = champernowne_block(b, w);
  const auto len = source.length().convert_to<std::int64_t>();
  const auto stream = source.window(1, static_cast<std::size_t>(len));
  std::mt19937 rng(7);
  for (std::int64_t k = 1; k <= w; ++k) {
    const auto blocks = all_blocks(b, k);
    for (std::int64_t j = 0; j <= len; ++j) {
      const Block& pattern = blocks[rng() % blocks.size()];
      REQUIRE(champernowne_count_fit(b, w, pattern, j) == brute_count(stream, pattern, j));
    }
  }
}

TEST_CASE("random cutoffs agree with prefix scans at larger widths") {
  std::mt19937_64 rng(6174);
  for (const auto [b, w] : std::vector<std::pair<std::int64_t, std::int64_t>>{{2, 5}, {2, 6}, {3, 5}}) {
    const BlockSource source = champernowne_block(b, w);
    const auto len = source.length().convert_to<std::int64_t>();
    const auto stream = source.window(1, static_cast<std::size_t>(len));
    for (int trial = 0; trial < 200; ++trial) {
      const std::int64_t k = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(w));
      std::vector<digit_t> digits(static_cast<std::size_t>(k));
      for (auto& d : digits) d = static_cast<digit_t>(rng() % b);
      const Block pattern(b, digits);
      const std::int64_t j_max = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(len + 1));
      CAPTURE(b);
      CAPTURE(w);
      CAPTURE(j_max);
      REQUIRE(champernowne_count_fit(b, w, pattern, j_max) == brute_count(stream, pattern, j_max));
    }
  }
}

TEST_CASE("patterns with digits outside the base never occur") {
  const Block pattern = make_block(5, {4, 0});
  CHECK(champernowne_count_fit(3, 4, pattern, 100) == 0);
  const BlockSource source = champernowne_block(3, 4);
  CHECK(source.count_fit(pattern) == 0);
}

TEST_CASE("digit random access agrees with sequential streaming") {
  const BlockSource source = champernowne_block(3, 4);
  const auto stream = source.window(1, 324);
  for (std::int64_t pos = 1; pos <= 324; ++pos)
    REQUIRE(source.digit(pos) == stream[static_cast<std::size_t>(pos - 1)]);
  // windows starting mid-stream
  const auto mid = source.window(100, 37);
  for (std::size_t t = 0; t < mid.size(); ++t) REQUIRE(mid[t] == stream[99 + t]);
}

TEST_CASE("closed form keeps counting far past enumerable sizes") {
  // C_{10,20} has 2e21 digits; full-stream counts stay exact and land inside
  // the combinatorial bounds (w-k+1) b^{w-k} <= N <= w b^{w-k}
  const Block pattern = make_block(10, {1, 2, 3});
  const BlockSource source = champernowne_block(10, 20);
  const BigInt full = source.count_fit(pattern);
  CHECK(full >= BigInt(18) * ipow(10, 17));
  CHECK(full <= BigInt(20) * ipow(10, 17));

  // early prefixes are zero-heavy (small words carry leading zeros), so the
  // prefix count sits strictly below the uniform density
  const BigInt j_max = ipow(10, 18);
  const BigInt prefix = champernowne_count_fit(10, 20, pattern, j_max);
  CHECK(prefix > 0);
  CHECK(Rational(prefix) / Rational(j_max) < Rational(1, 1000));
}

TEST_CASE("count_prefix_fit clamps to fitting starts") {
  const BlockSource source = champernowne_block(2, 2);  // 00 01 10 11, length 8
  const Block pattern = make_block(2, {1, 1});
  // stream is 0,0,0,1,1,0,1,1: "11" starts at j=4 and j=7
  CHECK(source.count_fit(pattern) == 2);
  CHECK(source.count_prefix_fit(pattern, 3) == 0);
  CHECK(source.count_prefix_fit(pattern, 4) == 1);
  CHECK(source.count_prefix_fit(pattern, 100) == 2);  // start limit beyond length clamps
}
