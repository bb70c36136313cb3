// Serial reference vs OpenMP kernels on the same blocks.

#include <benchmark/benchmark.h>

#include <vector>

#include "hlz/panel_grid.hpp"
#include "hlz/zeta.hpp"

using namespace hlz;

namespace {

std::vector<Block> blocks_at(std::int64_t first, std::int64_t count) {
  std::vector<Block> b(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) b[i].layout = block_layout(first + i);
  return b;
}

void BM_BlocksSerial(benchmark::State& state) {
  for (auto _ : state) {
    auto b = blocks_at(state.range(0), 4);
    evaluate_blocks_serial(b, kDefaultRsTerms);
    benchmark::DoNotOptimize(b[0].integral);
  }
}

void BM_BlocksParallel(benchmark::State& state) {
  for (auto _ : state) {
    auto b = blocks_at(state.range(0), 4);
    evaluate_blocks_parallel(b, kDefaultRsTerms);
    benchmark::DoNotOptimize(b[0].integral);
  }
}

struct Cached {
  std::vector<Block> blocks = blocks_at(0, 200);
  std::vector<const Block*> ptrs;
  Cached() {
    evaluate_blocks_parallel(blocks, kDefaultRsTerms);
    for (const Block& b : blocks) ptrs.push_back(&b);
  }
};

const Cached& cached() {
  static Cached c;
  return c;
}

void BM_WeightedSerial(benchmark::State& state) {
  const auto& c = cached();
  for (auto _ : state) benchmark::DoNotOptimize(weighted_sums_serial(c.ptrs, 2000.0).s0);
}

void BM_WeightedParallel(benchmark::State& state) {
  const auto& c = cached();
  for (auto _ : state) benchmark::DoNotOptimize(weighted_sums_parallel(c.ptrs, 2000.0).s0);
}

void BM_ZEval(benchmark::State& state) {
  double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(z_eval(t).z);
    t += 0.01;
  }
}

}  // namespace

BENCHMARK(BM_BlocksSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlocksParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightedSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_WeightedParallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ZEval)->Arg(1000)->Arg(100000);

BENCHMARK_MAIN();
