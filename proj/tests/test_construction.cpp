#include "doctest.h"

#include "qnormal/construction.hpp"
#include "qnormal/error.hpp"

#include <random>

using namespace qnormal;

namespace {

ScaleOverrides desk_scale() {
  ScaleOverrides o;
  o.l_rule = [](std::int64_t i) { return BigInt(i) * i * i; };
  o.w_rule = [](std::int64_t i) { return 2 * i; };
  return o;
}

}  // namespace

TEST_CASE("canonical cumulative lengths") {
  const auto c = canonical_instance(3);
  CHECK(c.cumulative_length(0) == 0);
  CHECK(c.cumulative_length(1) == 0);  // l_1 = 0
  // L_2 = 2^6 * (4 * 2^4) = 64 * 64
  CHECK(c.cumulative_length(2) == 4096);
  // i = 3: b_3 = 3, l_3 = 3^9, |x_3| = 9 * 3^9
  CHECK(c.term(3).b == 3);
  CHECK(c.term(3).l == 19683);
  CHECK(c.x_length(3) == 177147);
  CHECK(c.cumulative_length(3) == BigInt(4096) + BigInt(19683) * 177147);

  CHECK(c.canonical());
  CHECK(c.term(2).eps == Rational(1, 2));
  CHECK(c.term(1).eps == Rational(3, 5));
  CHECK(c.x_length(2) == 64);
}

TEST_CASE("decompose follows the prefix shape") {
  const auto c = canonical_instance(3);
  // n = L_2 exactly: the prefix ends on the block boundary
  const auto at_boundary = c.decompose(4096);
  CHECK(at_boundary.i == 2);
  CHECK(at_boundary.m == 0);
  CHECK(at_boundary.alpha == 0);
  CHECK(at_boundary.beta == 0);

  // one full copy of x_3 past L_2
  const auto one_copy = c.decompose(BigInt(4096) + 177147);
  CHECK(one_copy.i == 2);
  CHECK(one_copy.alpha == 1);
  CHECK(one_copy.beta == 0);

  const auto plus5 = c.decompose(BigInt(4096) + 177147 + 5);
  CHECK(plus5.alpha == 1);
  CHECK(plus5.beta == 5);

  // before the first non-empty run everything reads from copies of x_2
  const auto early = c.decompose(1);
  CHECK(early.i == 1);
  CHECK(early.m == 1);
  CHECK(early.alpha == 0);
  CHECK(early.beta == 1);

  CHECK_THROWS_AS(c.decompose(0), Error);
  CHECK_THROWS_AS(c.decompose(c.total_length() + 1), Error);
}

TEST_CASE("decompose invariants on random positions") {
  const auto c = canonical_instance(4, desk_scale());
  std::mt19937_64 rng(5);
  const auto total = c.total_length().convert_to<std::uint64_t>();
  for (int trial = 0; trial < 300; ++trial) {
    const BigInt n(1 + rng() % total);
    const auto d = c.decompose(n);
    CHECK(c.cumulative_length(d.i) <= n);
    if (d.i < c.i_cap()) CHECK(n < c.cumulative_length(d.i + 1) + (d.i + 1 == c.i_cap() ? 1 : 0));
    CHECK(d.m == n - c.cumulative_length(d.i));
    CHECK(d.alpha * c.x_length(d.i + 1) + d.beta == d.m);
    CHECK(d.beta >= 0);
    CHECK(d.beta < c.x_length(d.i + 1));
    CHECK(d.alpha >= 0);
    CHECK(d.alpha <= c.term(d.i + 1).l);
  }
}

TEST_CASE("the first digits of the canonical stream are C_{2,4}") {
  const auto c = canonical_instance(2);
  const auto first8 = c.digit_stream(1, 8);
  CHECK(first8 == std::vector<digit_t>{0, 0, 0, 0, 0, 0, 0, 1});
  CHECK(c.digit_stream(1, 0).empty());
}

TEST_CASE("digit_stream random access agrees with sequential generation") {
  const auto c = canonical_instance(3, desk_scale());
  // the whole scaled stream through L_3 is materializable
  const auto all = c.digit_stream(1, c.total_length().convert_to<std::size_t>());
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t from = 1 + rng() % (all.size() - 16);
    const std::size_t count = 1 + rng() % 16;
    const auto window = c.digit_stream(BigInt(from), count);
    for (std::size_t t = 0; t < count; ++t)
      REQUIRE(window[t] == all[from - 1 + t]);
  }
  // digits straddling the run boundary L_2 come from x_2 then x_3
  const BigInt l2 = c.cumulative_length(2);
  const auto straddle = c.digit_stream(l2 - 1, 4);
  CHECK(straddle[0] == all[(l2 - 2).convert_to<std::size_t>()]);
  CHECK(straddle[2] == all[l2.convert_to<std::size_t>()]);
}

TEST_CASE("every digit lies below its governing base") {
  const auto c = canonical_instance(3, desk_scale());
  const auto q = c.basic_sequence();
  const auto all = c.digit_stream(1, c.total_length().convert_to<std::size_t>());
  for (std::size_t pos = 0; pos < all.size(); ++pos)
    REQUIRE(BigInt(all[pos]) < q.at(BigInt(pos + 1)));
}

TEST_CASE("count_prefix equals brute-force counting on the materialized prefix") {
  const auto c = canonical_instance(4, desk_scale());
  // L_3 = 512 + 27*4374 = 118610 digits; materialize once
  const auto l3 = c.cumulative_length(3).convert_to<std::size_t>();
  const auto stream = c.digit_stream(1, l3);
  REQUIRE(l3 <= 1'000'000);

  std::mt19937_64 rng(17);
  // every block of length <= 3 over bases 2..4
  std::vector<Block> patterns;
  for (std::int64_t base = 2; base <= 4; ++base) {
    for (std::int64_t len = 1; len <= 3; ++len) {
      std::vector<digit_t> digits(static_cast<std::size_t>(len), 0);
      while (true) {
        patterns.emplace_back(base, digits);
        std::int64_t pos = len - 1;
        while (pos >= 0 &&
               static_cast<std::int64_t>(++digits[static_cast<std::size_t>(pos)]) == base)
          digits[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
      }
    }
  }

  for (const auto& pattern : patterns) {
    const std::int64_t k = static_cast<std::int64_t>(pattern.size());
    for (int trial = 0; trial < 2; ++trial) {
      const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % (l3 - 4));
      // brute force over the infinite-stream semantics: starts <= n, digits
      // available past n
      BigInt expected = 0;
      for (std::int64_t j = 1; j <= n; ++j) {
        bool ok = true;
        for (std::int64_t t = 0; t < k; ++t)
          if (stream[static_cast<std::size_t>(j - 1 + t)] != pattern.digits()[static_cast<std::size_t>(t)]) {
            ok = false;
            break;
          }
        if (ok) ++expected;
      }
      CAPTURE(pattern.str());
      CAPTURE(n);
      REQUIRE(c.count_prefix(pattern, BigInt(n)) == expected);
    }
  }

  // blocks carrying digits outside every base in range count zero
  CHECK(c.count_prefix(make_block(9, {8}), BigInt(l3)) == 0);
  // a length-2 block cannot start at n = 1 and fit... it can: digits continue
  CHECK(c.count_prefix(make_block(2, {0, 0}), 1) == 1);

  // positions hugging the segment boundary L_2, where occurrences straddle
  // the base change
  const std::int64_t l2 = c.cumulative_length(2).convert_to<std::int64_t>();
  for (const std::int64_t n : {l2 - 2, l2 - 1, l2, l2 + 1, l2 + 2}) {
    for (const auto& pattern : {make_block(2, {0, 1}), make_block(3, {1, 0, 0})}) {
      const std::int64_t k = static_cast<std::int64_t>(pattern.size());
      BigInt expected = 0;
      for (std::int64_t j = 1; j <= n; ++j) {
        bool ok = true;
        for (std::int64_t t = 0; t < k; ++t)
          if (stream[static_cast<std::size_t>(j - 1 + t)] !=
              pattern.digits()[static_cast<std::size_t>(t)]) {
            ok = false;
            break;
          }
        if (ok) ++expected;
      }
      REQUIRE(c.count_prefix(pattern, BigInt(n)) == expected);
    }
  }
}

TEST_CASE("canonical_instance rejects bad scale overrides") {
  ScaleOverrides shrinking;
  shrinking.l_rule = [](std::int64_t i) { return BigInt(100 - 10 * i); };
  shrinking.w_rule = [](std::int64_t i) { return 2 * i; };
  CHECK_THROWS_AS(canonical_instance(4, shrinking), Error);

  ScaleOverrides non_normal;  // w too small for eps_i = 1/i normality at i = 4
  non_normal.l_rule = [](std::int64_t i) { return BigInt(i); };
  non_normal.w_rule = [](std::int64_t) { return 1; };
  CHECK_THROWS_AS(canonical_instance(4, non_normal), Error);
}

TEST_CASE("prefix schedules materialize to the digit stream") {
  const auto c = canonical_instance(3, desk_scale());
  const BigInt cut = 700;
  const auto schedule = c.prefix_schedule(cut);
  CHECK(schedule.length() == cut);
  const auto via_schedule = schedule.window(1, 700);
  CHECK(via_schedule == c.digit_stream(1, 700));
}

TEST_CASE("basic sequence runs mirror the construction") {
  const auto c = canonical_instance(3);
  const auto q = c.basic_sequence();
  CHECK(q.at(1) == 2);
  CHECK(q.at(4096) == 2);
  CHECK(q.at(4097) == 3);
  CHECK(q.at(c.total_length()) == 3);
  CHECK_THROWS_AS(q.at(c.total_length() + 1), Error);
}
