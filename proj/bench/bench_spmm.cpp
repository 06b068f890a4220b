// Kernel comparison: OpenMP tile-parallel bcsr_spmm against the serial
// reference, and block-skipping against full-grid iteration, on band matrices.

#include <benchmark/benchmark.h>

#include <map>
#include <tuple>

#include "bsmm/blocking.hpp"
#include "bsmm/spmm.hpp"
#include "bsmm/synth.hpp"

namespace {

using namespace bsmm;

struct Fixture {
  BcsrMatrix<float> a;
  DenseMatrix<float> b;
};

const Fixture& band_fixture(index_t n, index_t bandwidth, index_t n_dense_cols) {
  static std::map<std::tuple<index_t, index_t, index_t>, Fixture> cache;
  auto [it, fresh] = cache.try_emplace({n, bandwidth, n_dense_cols});
  if (fresh) {
    it->second.a = to_bcsr(gen_band<float>({n, bandwidth, 1}), BlockDims{});
    it->second.b = gen_dense<float>(n, n_dense_cols, 2);
  }
  return it->second;
}

void set_counters(benchmark::State& state, const BcsrMatrix<float>& a, index_t nnz, index_t n_dense_cols) {
  state.counters["n_e"] = static_cast<double>(a.n_blocks());
  state.counters["GFLOP/s"] = benchmark::Counter(2.0 * static_cast<double>(nnz) * static_cast<double>(n_dense_cols) *
                                                     static_cast<double>(state.iterations()) * 1e-9,
                                                 benchmark::Counter::kIsRate);
}

void BM_Parallel(benchmark::State& state) {
  const index_t n = 4096, bw = state.range(0), cols = state.range(1);
  const auto& f = band_fixture(n, bw, cols);
  SpmmOptions o;
  for (auto _ : state) benchmark::DoNotOptimize(bcsr_spmm(f.a, f.b, o));
  set_counters(state, f.a, band_nnz(n, bw), cols);
}

void BM_Serial(benchmark::State& state) {
  const index_t n = 4096, bw = state.range(0), cols = state.range(1);
  const auto& f = band_fixture(n, bw, cols);
  SpmmOptions o;
  for (auto _ : state) benchmark::DoNotOptimize(bcsr_spmm_serial(f.a, f.b, o));
  set_counters(state, f.a, band_nnz(n, bw), cols);
}

void BM_DenseGrid(benchmark::State& state) {
  const index_t n = 4096, bw = state.range(0), cols = state.range(1);
  const auto& f = band_fixture(n, bw, cols);
  SpmmOptions o;
  o.skip_empty = false;
  for (auto _ : state) benchmark::DoNotOptimize(bcsr_spmm(f.a, f.b, o));
  set_counters(state, f.a, band_nnz(n, bw), cols);
}

void band_args(benchmark::internal::Benchmark* b) {
  for (int bw : {16, 64, 256})
    for (int cols : {8, 64}) b->Args({bw, cols});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_Parallel)->Apply(band_args);
BENCHMARK(BM_Serial)->Apply(band_args);
BENCHMARK(BM_DenseGrid)->Args({16, 8})->Args({64, 8})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
