// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <numbers>
#include <vector>

#include "benchmark/benchmark.h"
#include "qsearch/analysis.hpp"
#include "qsearch/cli.hpp"
#include "qsearch/oracle.hpp"

namespace {

using namespace qsearch;

std::vector<double> times(double window, int n) { return linspace(0.0, window, n); }

void BM_SampleSerial(benchmark::State& state) {
  const SearchSpace space(state.range(0));
  const SpectralPropagator prop(build_full({1.0, 0.1, 1.0, 0.01}, space));
  const auto ts = times(100.0, 4096);
  for (auto _ : state) benchmark::DoNotOptimize(sample_target_probability_serial(prop, ts));
}

void BM_SampleParallel(benchmark::State& state) {
  const SearchSpace space(state.range(0));
  const SpectralPropagator prop(build_full({1.0, 0.1, 1.0, 0.01}, space));
  const auto ts = times(100.0, 4096);
  for (auto _ : state) benchmark::DoNotOptimize(sample_target_probability(prop, ts));
}

std::vector<double> phases(int n) {
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = 2 * std::numbers::pi * j / n;
  return out;
}

void BM_CorrectionSerial(benchmark::State& state) {
  const auto eps = linspace(0.0, 1.0, static_cast<int>(state.range(0)));
  const auto phi = phases(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        error_correction_search_serial(1.0, 0.05, SearchSpace(256), eps, phi));
  }
}

void BM_CorrectionParallel(benchmark::State& state) {
  const auto eps = linspace(0.0, 1.0, static_cast<int>(state.range(0)));
  const auto phi = phases(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(error_correction_search(1.0, 0.05, SearchSpace(256), eps, phi));
  }
}

cli::RunConfig sweep_config() {
  return cli::parse_config({"sweep", "--n", "100", "--eps", "0.1", "--phi", "1.57", "--axis",
                            "delta", "--min", "-3e-4", "--max", "3e-4", "--steps", "20001"});
}

void BM_SweepSerial(benchmark::State& state) {
  const auto cfg = sweep_config();
  for (auto _ : state) benchmark::DoNotOptimize(cli::sweep_rows_serial(cfg));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto cfg = sweep_config();
  for (auto _ : state) benchmark::DoNotOptimize(cli::sweep_rows(cfg, cfg.worker_count));
}

BENCHMARK(BM_SampleSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorrectionSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorrectionParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
