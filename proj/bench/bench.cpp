// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include "superlat/diophant.hpp"
#include "superlat/isosearch.hpp"

using namespace superlat;

namespace {

const QMatrix kWilson{{5, 7, 6, 5}, {7, 10, 8, 7}, {6, 8, 10, 9}, {5, 7, 9, 10}};

PosDefForm norm_form() {
  return PosDefForm(QMatrix{{4, 1, 0, 1, 0}, {1, 3, 1, 0, 0}, {0, 1, 5, 1, 1}, {1, 0, 1, 4, 0}, {0, 0, 1, 0, 3}});
}

void BM_NormSerial(benchmark::State& state) {
  PosDefForm q = norm_form();
  for (auto _ : state) benchmark::DoNotOptimize(vectors_of_norm_serial(q, state.range(0)));
}

void BM_NormParallel(benchmark::State& state) {
  PosDefForm q = norm_form();
  for (auto _ : state) benchmark::DoNotOptimize(vectors_of_norm(q, state.range(0)));
}

void BM_WilsonSearch(benchmark::State& state) {
  auto p = make_problem(QMatrix::identity(4), kWilson, QVector::from_ints({1, 0, 0, 0}));
  SearchOptions opts;
  opts.integral_only = true;
  opts.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_isometries(p, opts));
}

void BM_WilsonBruteForce(benchmark::State& state) {
  GramForm b(QMatrix::identity(4)), bp(kWilson);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_isometries(b, bp, true, -1, static_cast<int>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_NormSerial)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NormParallel)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WilsonSearch)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WilsonBruteForce)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
