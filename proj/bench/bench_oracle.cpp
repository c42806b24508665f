#include <benchmark/benchmark.h>

#include <random>

#include "sllift/actions.hpp"
#include "sllift/lifting.hpp"
#include "sllift/oracle.hpp"

using namespace sllift;

static void BM_CountParallel(benchmark::State& state) {
  const EnumSpec spec = EnumSpec::uniform(static_cast<std::size_t>(state.range(0)), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(count_sl(spec));
  state.counters["candidates"] = static_cast<double>(candidate_space(spec));
}

static void BM_CountSerial(benchmark::State& state) {
  const EnumSpec spec = EnumSpec::uniform(static_cast<std::size_t>(state.range(0)), state.range(1));
  OracleOptions opts;
  opts.parallel = false;
  for (auto _ : state) benchmark::DoNotOptimize(count_sl(spec, opts));
}

static void BM_CountReference(benchmark::State& state) {
  const EnumSpec spec = EnumSpec::uniform(static_cast<std::size_t>(state.range(0)), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(count_sl_reference(spec));
}

BENCHMARK(BM_CountParallel)->Args({2, 20})->Args({2, 100})->Args({3, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountSerial)->Args({2, 20})->Args({2, 100})->Args({3, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountReference)->Args({2, 20})->Args({3, 1})->Unit(benchmark::kMillisecond);

static void BM_Histogram(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(norm_histogram(2, state.range(0)));
}
BENCHMARK(BM_Histogram)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_MinLift(benchmark::State& state) {
  const IntMatrix x{{13, 0}, {0, 13}};
  for (auto _ : state) benchmark::DoNotOptimize(min_lift_norm(x, 24, 4 * 24 * 24));
}
BENCHMARK(BM_MinLift)->Unit(benchmark::kMillisecond);

static void BM_Lift(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const IntMatrix x = random_sl_mod(n, 9973, rng);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(lift(x, 9973, seed++));
}
BENCHMARK(BM_Lift)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

static void BM_Diameter(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(diameter_profile(Space::Projective, 2, state.range(0), 256));
}
BENCHMARK(BM_Diameter)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
