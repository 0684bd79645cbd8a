#include "doctest.h"

#include "qnormal/block.hpp"
#include "qnormal/block_source.hpp"
#include "qnormal/error.hpp"
#include "qnormal/schedule.hpp"

using namespace qnormal;

TEST_CASE("make_block validates digits against the base") {
  const Block b = make_block(10, {2, 5});
  CHECK(b.base() == 10);
  CHECK(b.size() == 2);

  CHECK_THROWS_AS(make_block(3, {0, 3}), Error);
  CHECK_THROWS_AS(make_block(2, {}), Error);
  CHECK_THROWS_AS(make_block(1, {0}), Error);
  try {
    make_block(3, {0, 3});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::digit_out_of_range);
  }
  try {
    make_block(2, {});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_block);
  }
}

TEST_CASE("concatenation matches the worked example") {
  // 2*(2,3,5) then 1*(0,8) -> (2,3,5,2,3,5,0,8)
  const auto schedule = concat({{2, make_block(10, {2, 3, 5})}, {1, make_block(10, {0, 8})}});
  CHECK(schedule.length() == 8);
  const Block whole = materialize(schedule, 100);
  CHECK(whole.digits().size() == 8);
  CHECK(whole == make_block(10, {2, 3, 5, 2, 3, 5, 0, 8}));

  const auto zero_first = concat({{0, make_block(10, {9})}, {1, make_block(10, {2, 3, 5})}});
  CHECK(materialize(zero_first, 10) == make_block(10, {2, 3, 5}));

  const auto repeated = concat({{3, make_block(2, {0})}});
  CHECK(materialize(repeated, 10) == make_block(2, {0, 0, 0}));

  CHECK_THROWS_AS(materialize(schedule, 7), Error);
}

TEST_CASE("champernowne block C_{3,2} matches its explicit digits") {
  const BlockSource c32 = champernowne_block(3, 2);
  CHECK(c32.length() == 18);
  const std::vector<digit_t> want{0, 0, 0, 1, 0, 2, 1, 0, 1, 1, 1, 2, 2, 0, 2, 1, 2, 2};
  CHECK(c32.window(1, 18) == want);

  const BlockSource c21 = champernowne_block(2, 1);
  CHECK(c21.window(1, 2) == std::vector<digit_t>{0, 1});

  CHECK(champernowne_block(2, 3).length() == 24);
  CHECK_THROWS_AS(champernowne_block(1, 2), Error);
  CHECK_THROWS_AS(champernowne_block(2, 0), Error);
}

TEST_CASE("count_occurrences counts overlapping fits") {
  const std::vector<digit_t> zeros{0, 0, 0, 0};
  CHECK(count_occurrences(make_block(2, {0, 0}), zeros, 4) == 3);
  CHECK(count_occurrences(make_block(2, {0, 0}), zeros, 2) == 2);
  CHECK(count_occurrences(make_block(10, {9}), std::vector<digit_t>{0, 1, 2}, 3) == 0);
  CHECK(count_occurrences(make_block(2, {0}), zeros, 0) == 0);

  // monotone, with unit steps
  const Block pattern = make_block(2, {0, 1});
  const BlockSource c23 = champernowne_block(2, 3);
  const auto y = c23.window(1, 24);
  BigInt prev = 0;
  for (int n = 1; n <= 24; ++n) {
    const BigInt cur = count_occurrences(pattern, y, n);
    CHECK(cur >= prev);
    CHECK(cur - prev <= 1);
    prev = cur;
  }
  // bracket from the counting bounds at b=2, w=3, k=2
  const BigInt full = count_occurrences(pattern, y, 24);
  CHECK(full >= 4);
  CHECK(full <= 6);
}
