#include "doctest.h"

#include "qnormal/cantor.hpp"
#include "qnormal/error.hpp"

#include <random>

using namespace qnormal;

namespace {

BasicSequence successor_rule() {
  return BasicSequence::from_rule("n+1", [](const BigInt& n) { return n + 1; });
}

Rational naive_q_sum(const BasicSequence& q, std::int64_t n, std::int64_t k) {
  Rational sum = 0;
  for (std::int64_t j = 1; j <= n; ++j) {
    BigInt prod = 1;
    for (std::int64_t t = 0; t < k; ++t) prod *= q.at(BigInt(j + t));
    sum += Rational(1, prod);
  }
  return sum;
}

}  // namespace

TEST_CASE("q_partial_sum worked examples") {
  const auto const10 = BasicSequence::constant(10);
  const auto s1 = q_partial_sum(const10, 7, 1, SumMode::exact);
  CHECK(*s1.exact == Rational(7, 10));

  // q_n = n+1: 1/6 + 1/12 + 1/20 + 1/30 + 1/42 = 5/14
  const auto s2 = q_partial_sum(successor_rule(), 5, 2, SumMode::exact);
  CHECK(*s2.exact == Rational(5, 14));

  const auto s3 = q_partial_sum(BasicSequence::constant(3), 81, 4, SumMode::exact);
  CHECK(*s3.exact == Rational(81, 81));
}

TEST_CASE("grouped summation equals naive term-by-term on piecewise-constant sequences") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<QRun> runs;
    BigInt end = 0;
    const int run_count = 1 + static_cast<int>(rng() % 6);
    // run lengths up to ~10^4 positions in total
    for (int r = 0; r < run_count; ++r) {
      end += 1 + static_cast<int>(rng() % (trial < 30 ? 40u : 3000u));
      runs.push_back(QRun{end, BigInt(2 + static_cast<int>(rng() % 7))});
    }
    const auto q = BasicSequence::from_runs(runs);
    const std::int64_t k = 1 + static_cast<int>(rng() % 4);
    const std::int64_t max_n = (end - k).convert_to<std::int64_t>();
    if (max_n < 1) continue;
    const std::int64_t n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_n));
    const auto grouped = q_partial_sum(q, n, k, SumMode::exact);
    CHECK(*grouped.exact == naive_q_sum(q, n, k));
  }
}

TEST_CASE("float mode stays within its certified error bound") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::int64_t n = 1 + static_cast<int>(rng() % 1000);
    const std::int64_t k = 1 + static_cast<int>(rng() % 3);
    BasicSequence q = BasicSequence::constant(2);
    if (trial % 2 == 0) {
      q = BasicSequence::constant(2 + static_cast<int>(rng() % 9));
    } else {
      std::vector<QRun> runs;
      BigInt end = 0;
      for (int r = 0; r < 4; ++r) {
        end += 300 + static_cast<int>(rng() % 400);
        runs.push_back(QRun{end, BigInt(2 + static_cast<int>(rng() % 7))});
      }
      q = BasicSequence::from_runs(runs);  // covers n + k - 1 <= 1002 < 4*300
    }
    const auto exact = q_partial_sum(q, n, k, SumMode::exact);
    const auto approx = q_partial_sum(q, n, k, SumMode::floating);
    const HighFloat diff = abs(approx.value - to_highfloat(*exact.exact, 160));
    CHECK(diff <= approx.error_bound);
  }
  // rule-form sequence, naive floating path
  const auto rule = successor_rule();
  const auto exact = q_partial_sum(rule, 200, 2, SumMode::exact);
  const auto approx = q_partial_sum(rule, 200, 2, SumMode::floating);
  CHECK(abs(approx.value - to_highfloat(*exact.exact, 160)) <= approx.error_bound);
}

TEST_CASE("digits_to_value reproduces the worked expansions") {
  // 1/4 = 2/10 + 5/100 under the constant base 10
  const auto const10 = BasicSequence::constant(10);
  const std::vector<BigInt> quarter{2, 5, 0, 0};
  const auto v = digits_to_value_exact(const10, quarter, 4);
  CHECK(v.value == Rational(1, 4));
  CHECK(v.tail_bound == Rational(1, 10000));

  // q_n = n+1 with all digits 1 sums to e - 2 within the tail bound
  const std::vector<BigInt> ones(20, BigInt(1));
  const auto e2 = digits_to_value(successor_rule(), ones, 20, 256);
  PrecisionGuard guard(256);
  const HighFloat e_minus_2 = exp(HighFloat(1)) - 2;
  CHECK(abs(e2.value - e_minus_2) <= e2.tail_bound + e2.rounding_bound);

  // all zeros -> 0
  const std::vector<BigInt> zeros(5, BigInt(0));
  CHECK(digits_to_value_exact(const10, zeros, 5).value == 0);

  // digit at q_n rejected
  const std::vector<BigInt> bad{9, 10};
  CHECK_THROWS_AS(digits_to_value_exact(const10, bad, 2), Error);
}

TEST_CASE("value_to_digits worked examples") {
  const auto const10 = BasicSequence::constant(10);
  const auto quarter = value_to_digits(const10, Rational(1, 4), 4);
  CHECK(quarter.digits == std::vector<BigInt>{2, 5, 0, 0});
  CHECK(quarter.remainder == 0);

  const auto zero = value_to_digits(const10, Rational(0), 3);
  CHECK(zero.digits == std::vector<BigInt>{0, 0, 0});

  // 1/2 in base 2 takes the terminating form (1,0,0), never (0,1,1)
  const auto half = value_to_digits(BasicSequence::constant(2), Rational(1, 2), 3);
  CHECK(half.digits == std::vector<BigInt>{1, 0, 0});

  CHECK_THROWS_AS(value_to_digits(const10, Rational(3, 2), 2), Error);
  CHECK_THROWS_AS(value_to_digits(const10, Rational(-1, 2), 2), Error);
}

TEST_CASE("round trip: value -> digits -> value is the identity on rationals") {
  std::mt19937 rng(41);
  const auto rule = successor_rule();
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t den = 2 + rng() % 999'998;
    const std::uint64_t num = rng() % den;
    const Rational x(num, den);
    BasicSequence q = BasicSequence::constant(2);
    switch (trial % 3) {
      case 0: q = BasicSequence::constant(2 + static_cast<int>(rng() % 20)); break;
      case 1: q = rule; break;
      case 2: {
        std::vector<QRun> runs;
        BigInt end = 0;
        for (int r = 0; r < 3; ++r) {
          end += 5 + static_cast<int>(rng() % 30);
          runs.push_back(QRun{end, BigInt(2 + static_cast<int>(rng() % 8))});
        }
        q = BasicSequence::from_runs(runs);
        break;
      }
    }
    const std::size_t n = 1 + rng() % 25;
    const auto digits = value_to_digits(q, x, n);
    const auto back = digits_to_value_exact(q, digits.digits, n);
    // x = partial sum + remainder / (q_1 ... q_n), exactly
    BigInt prod = 1;
    for (std::size_t j = 1; j <= n; ++j) prod *= q.at(BigInt(j));
    CHECK(back.value + digits.remainder / Rational(prod) == x);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(digits.digits[j] >= 0);
      CHECK(digits.digits[j] < q.at(BigInt(j + 1)));
    }
  }
}

TEST_CASE("divergence reports") {
  const auto const10 = BasicSequence::constant(10);
  const std::vector<BigInt> checkpoints{100, 1000, 10000};
  const auto r1 = k_divergence_report(const10, 2, checkpoints);
  REQUIRE(r1.rows.size() == 3);
  CHECK(r1.rows[0].value == doctest::Approx(1.0));
  CHECK(r1.rows[1].value == doctest::Approx(10.0));
  CHECK(r1.rows[2].value == doctest::Approx(100.0));
  CHECK(r1.divergence_consistent);

  // q_n = 2^n: Q_n^(1) = 1 - 2^-n converges (to 1), Q_n^(2) converges to 1/6
  const auto doubling =
      BasicSequence::from_rule("2^n", [](const BigInt& n) { return ipow(2, n.convert_to<std::uint64_t>()); });
  const std::vector<BigInt> cps{10, 100, 1000};
  const auto r2 = k_divergence_report(doubling, 1, cps);
  CHECK_FALSE(r2.divergence_consistent);
  CHECK(r2.rows.back().value <= 1.0);
  const auto r3 = k_divergence_report(doubling, 2, cps);
  CHECK_FALSE(r3.divergence_consistent);
  CHECK(r3.rows.back().value == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("partial sums are positive and non-decreasing in n") {
  const auto q = successor_rule();
  Rational prev = 0;
  for (std::int64_t n = 1; n <= 40; ++n) {
    const auto s = q_partial_sum(q, n, 3, SumMode::exact);
    CHECK(*s.exact > 0);
    CHECK(*s.exact >= prev);
    prev = *s.exact;
  }
}

TEST_CASE("undefined positions are rejected") {
  const auto q = BasicSequence::from_list({2, 3, 4});
  CHECK(q.at(3) == 4);
  CHECK_THROWS_AS(q.at(4), Error);
  CHECK_THROWS_AS(q_partial_sum(q, 3, 2, SumMode::exact), Error);  // needs q_4
  CHECK(*q_partial_sum(q, 2, 2, SumMode::exact).exact == Rational(1, 6) + Rational(1, 12));
}
