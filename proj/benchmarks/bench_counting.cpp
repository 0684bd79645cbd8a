#include <benchmark/benchmark.h>

#include "qnormal/analysis.hpp"
#include "qnormal/config.hpp"

using namespace qnormal;

namespace {

const Construction& scaled() {
  static const Construction c = build_construction(builtin_schedule("thm4.1-scaled"));
  return c;
}

void BM_ChampernowneClosedFormCount(benchmark::State& state) {
  const std::int64_t w = state.range(0);
  const Block pattern = make_block(4, {1, 2, 3});
  const BlockSource source = BlockSource::champernowne(4, w);
  for (auto _ : state) {
    benchmark::DoNotOptimize(source.count_fit(pattern));
  }
}
BENCHMARK(BM_ChampernowneClosedFormCount)->Arg(8)->Arg(16)->Arg(64)->Arg(256);

void BM_ChampernowneScanCount(benchmark::State& state) {
  // the brute-force route the closed form replaces (w = 8 is ~5e5 digits)
  const std::int64_t w = state.range(0);
  const Block pattern = make_block(4, {1, 2, 3});
  const BlockSource source = BlockSource::champernowne(4, w);
  const Block whole(4, source.window(1, source.length().convert_to<std::size_t>()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_occurrences(pattern, whole, source.length()));
  }
  state.SetItemsProcessed(state.iterations() * source.length().convert_to<std::int64_t>());
}
BENCHMARK(BM_ChampernowneScanCount)->Arg(6)->Arg(8);

void BM_CountPrefixScaledL5(benchmark::State& state) {
  // exact N_n^Q at n = L_5 (1.2e10 digits) through the schedule decomposition
  const auto& c = scaled();
  const Block pattern = make_block(2, {0, 1});
  const BigInt n = c.cumulative_length(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(c.count_prefix(pattern, n));
  }
}
BENCHMARK(BM_CountPrefixScaledL5);

void BM_DigitStreamThroughput(benchmark::State& state) {
  const auto& c = scaled();
  const std::size_t count = 1 << 16;
  BigInt from = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(c.digit_stream(from, count));
    from += count;
    if (from > c.cumulative_length(4)) from = 1;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}
BENCHMARK(BM_DigitStreamThroughput);

void BM_QPartialSumGrouped(benchmark::State& state) {
  const auto& c = scaled();
  const BigInt n = c.cumulative_length(5) - 12345;
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_partial_sum(c.basic_sequence(), n, 3, SumMode::exact));
  }
}
BENCHMARK(BM_QPartialSumGrouped);

void BM_QPartialSumNaiveRule(benchmark::State& state) {
  const auto q = BasicSequence::from_rule("n+1", [](const BigInt& n) { return n + 1; });
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_partial_sum(q, state.range(0), 2, SumMode::floating));
  }
}
BENCHMARK(BM_QPartialSumNaiveRule)->Arg(1000)->Arg(10000);

void BM_NormalityCheckC36(benchmark::State& state) {
  const BlockSource c36 = BlockSource::champernowne(3, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        check_normality(c36, Rational(1, 3), 3, Weighting::uniform(3), 3));
  }
}
BENCHMARK(BM_NormalityCheckC36);

}  // namespace

BENCHMARK_MAIN();
