#include "bsmm/spmm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bsmm {

namespace {

// Loop order i, l, j: each c[i][j] receives its k products in ascending l.
template <Scalar T>
void mma_generic(TileShape s, const T* __restrict a, const T* __restrict b, index_t ldb, T* __restrict c) {
  for (index_t i = 0; i < s.m; ++i) {
    T* ci = c + i * s.n;
    const T* ai = a + i * s.k;
    for (index_t l = 0; l < s.k; ++l) {
      const T av = ai[l];
      const T* bl = b + l * ldb;
      for (index_t j = 0; j < s.n; ++j) ci[j] += av * bl[j];
    }
  }
}

template <Scalar T, int M, int N, int K>
void mma_fixed(const T* __restrict a, const T* __restrict b, index_t ldb, T* __restrict c) {
  for (int i = 0; i < M; ++i) {
    T* ci = c + i * N;
    const T* ai = a + i * K;
    for (int l = 0; l < K; ++l) {
      const T av = ai[l];
      const T* bl = b + l * ldb;
      for (int j = 0; j < N; ++j) ci[j] += av * bl[j];
    }
  }
}

template <Scalar T>
struct Kernel {
  using Fixed = void (*)(const T*, const T*, index_t, T*);

  TileShape shape;
  Fixed fixed = nullptr;

  explicit Kernel(TileShape s, bool allow_fixed) : shape(s) {
    if (!allow_fixed) return;
    if (s == TileShape{16, 8, 8}) fixed = &mma_fixed<T, 16, 8, 8>;
    else if (s == TileShape{16, 8, 16}) fixed = &mma_fixed<T, 16, 8, 16>;
    else if (s == TileShape{8, 8, 8}) fixed = &mma_fixed<T, 8, 8, 8>;
    else if (s == TileShape{16, 16, 8}) fixed = &mma_fixed<T, 16, 16, 8>;
    else if (s == TileShape{16, 16, 16}) fixed = &mma_fixed<T, 16, 16, 16>;
    else if (s == TileShape{16, 1, 8}) fixed = &mma_fixed<T, 16, 1, 8>;
  }

  void operator()(const T* a, const T* b, index_t ldb, T* c) const {
    if (fixed) fixed(a, b, ldb, c);
    else mma_generic(shape, a, b, ldb, c);
  }
};

template <Scalar T>
struct Scratch {
  std::vector<T> c_tile, b_stage, zero_block;
  explicit Scratch(TileShape s)
      : c_tile(static_cast<std::size_t>(s.m * s.n)),
        b_stage(static_cast<std::size_t>(s.k * s.n)),
        zero_block(static_cast<std::size_t>(s.m * s.k), T{0}) {}
};

struct TileCounts {
  index_t calls = 0;
  index_t touched = 0;
};

// Computes output tile (br, panel). `direct` lets full interior panels of B be
// read in place instead of staged; values and order are the same either way.
template <Scalar T>
TileCounts process_tile(const BcsrMatrix<T>& ab, const DenseMatrix<T>& b, DenseMatrix<T>& c, const Kernel<T>& kernel,
                        Scratch<T>& scratch, index_t br, index_t panel, bool skip_empty, bool direct) {
  const TileShape s = kernel.shape;
  const index_t n_total = b.n_cols();
  const index_t col0 = panel * s.n;
  const index_t ncols = std::min(s.n, n_total - col0);
  const index_t row0 = br * s.m;
  const index_t nrows = std::min(s.m, ab.n_rows() - row0);
  const index_t k_total = ab.n_cols();

  std::fill(scratch.c_tile.begin(), scratch.c_tile.end(), T{0});
  TileCounts counts;

  auto multiply = [&](const T* a_block, index_t bc) {
    const index_t k0 = bc * s.k;
    const index_t krows = std::min(s.k, k_total - k0);
    const T* b_ptr;
    index_t ldb;
    if (direct && ncols == s.n && krows == s.k) {
      b_ptr = b.data().data() + k0 * n_total + col0;
      ldb = n_total;
    } else {
      T* stage = scratch.b_stage.data();
      for (index_t l = 0; l < s.k; ++l)
        for (index_t j = 0; j < s.n; ++j)
          stage[l * s.n + j] = (l < krows && j < ncols) ? b(k0 + l, col0 + j) : T{0};
      b_ptr = stage;
      ldb = s.n;
    }
    kernel(a_block, b_ptr, ldb, scratch.c_tile.data());
    ++counts.calls;
  };

  auto ptr = ab.block_row_ptr();
  auto cols = ab.block_col_idx();
  const T* values = ab.block_values().data();
  const index_t area = ab.dims().area();
  if (skip_empty) {
    for (index_t blk = ptr[br]; blk < ptr[br + 1]; ++blk) {
      multiply(values + blk * area, cols[blk]);
      ++counts.touched;
    }
  } else {
    index_t blk = ptr[br];
    for (index_t bc = 0; bc < ab.n_block_cols(); ++bc) {
      if (blk < ptr[br + 1] && cols[blk] == bc) {
        multiply(values + blk * area, bc);
        ++counts.touched;
        ++blk;
      } else {
        multiply(scratch.zero_block.data(), bc);
      }
    }
  }

  for (index_t i = 0; i < nrows; ++i) {
    auto out = c.row(row0 + i);
    for (index_t j = 0; j < ncols; ++j) out[col0 + j] = scratch.c_tile[i * s.n + j];
  }
  return counts;
}

template <Scalar T>
void check_operands(const BcsrMatrix<T>& ab, const DenseMatrix<T>& b, const SpmmOptions& opts) {
  if (ab.n_cols() != b.n_rows())
    throw std::invalid_argument("bcsr_spmm: A is " + std::to_string(ab.n_rows()) + "x" + std::to_string(ab.n_cols()) +
                                " but B has " + std::to_string(b.n_rows()) + " rows");
  if (opts.tile_n < 1) throw std::invalid_argument("bcsr_spmm: tile_n must be at least 1");
  if (opts.workers < 0) throw std::invalid_argument("bcsr_spmm: worker count must be positive (0 = auto)");
}

using Clock = std::chrono::steady_clock;

}  // namespace

template <Scalar T>
void tile_mma(std::span<const T> a, std::span<const T> b, std::span<T> c, TileShape shape) {
  if (shape.m < 1 || shape.n < 1 || shape.k < 1) throw std::invalid_argument("tile_mma: empty shape");
  if (static_cast<index_t>(a.size()) != shape.m * shape.k || static_cast<index_t>(b.size()) != shape.k * shape.n ||
      static_cast<index_t>(c.size()) != shape.m * shape.n)
    throw std::invalid_argument("tile_mma: operand sizes do not match the tile shape");
  Kernel<T>(shape, true)(a.data(), b.data(), shape.n, c.data());
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <Scalar T>
DenseMatrix<T> bcsr_spmm(const BcsrMatrix<T>& ab, const DenseMatrix<T>& b, const SpmmOptions& opts,
                         SpmmCounters* counters) {
  check_operands(ab, b, opts);
  const auto start = Clock::now();
  const TileShape shape = tile_shape(ab.dims(), opts.tile_n);
  const Kernel<T> kernel(shape, true);
  const index_t panels = ceil_div(b.n_cols(), shape.n);
  const index_t tiles = ab.n_block_rows() * panels;
  DenseMatrix<T> c(ab.n_rows(), b.n_cols());

  index_t calls = 0, touched = 0;
  [[maybe_unused]] const int workers = resolve_workers(opts.workers);
#pragma omp parallel num_threads(workers) reduction(+ : calls, touched)
  {
    Scratch<T> scratch(shape);
#pragma omp for schedule(static)
    for (index_t t = 0; t < tiles; ++t) {
      const TileCounts tc = process_tile(ab, b, c, kernel, scratch, t / panels, t % panels, opts.skip_empty, true);
      calls += tc.calls;
      touched += tc.touched;
    }
  }

  if (counters) {
    counters->tile_mma_calls = calls;
    counters->blocks_touched = touched;
    counters->tiles = tiles;
    counters->wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  }
  return c;
}

template <Scalar T>
DenseMatrix<T> bcsr_spmm_serial(const BcsrMatrix<T>& ab, const DenseMatrix<T>& b, const SpmmOptions& opts,
                                SpmmCounters* counters) {
  check_operands(ab, b, opts);
  const auto start = Clock::now();
  const TileShape shape = tile_shape(ab.dims(), opts.tile_n);
  const Kernel<T> kernel(shape, false);
  const index_t panels = ceil_div(b.n_cols(), shape.n);
  DenseMatrix<T> c(ab.n_rows(), b.n_cols());
  Scratch<T> scratch(shape);
  TileCounts total;
  for (index_t br = 0; br < ab.n_block_rows(); ++br)
    for (index_t p = 0; p < panels; ++p) {
      const TileCounts tc = process_tile(ab, b, c, kernel, scratch, br, p, opts.skip_empty, false);
      total.calls += tc.calls;
      total.touched += tc.touched;
    }
  if (counters) {
    counters->tile_mma_calls = total.calls;
    counters->blocks_touched = total.touched;
    counters->tiles = ab.n_block_rows() * panels;
    counters->wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  }
  return c;
}

template <Scalar T>
SpmmPlan<T>::SpmmPlan(const CsrMatrix<T>& a, const PipelineConfig& config)
    : config_(config), n_cols_(a.n_cols()), nnz_(a.nnz()) {
  if (config.reorder) {
    report_ = evaluate_reordering(a, config.dims, config.tau, config.mode, config.keep_best);
    blocked_ = to_bcsr(apply_reordering(a, report_), config.dims);
  } else {
    report_.tau = config.tau;
    report_.mode = config.mode;
    report_.keep_best = config.keep_best;
    report_.applied = false;
    report_.rows = Permutation::identity(a.n_rows());
    if (config.mode == ReorderMode::rows_cols) report_.cols = Permutation::identity(a.n_cols());
    blocked_ = to_bcsr(a, config.dims);
    report_.before = block_stats(blocked_, a.nnz());
    report_.after = report_.before;
  }
}

template <Scalar T>
DenseMatrix<T> SpmmPlan<T>::execute(const DenseMatrix<T>& b, const SpmmOptions& opts, SpmmCounters* counters) const {
  if (b.n_rows() != n_cols_)
    throw std::invalid_argument("spmm: A has " + std::to_string(n_cols_) + " columns but B has " +
                                std::to_string(b.n_rows()) + " rows");
  // Column reordering permutes A's columns, so B's rows follow the same map.
  DenseMatrix<T> c = report_.cols && !report_.cols->is_identity()
                         ? bcsr_spmm(blocked_, permute_rows(b, *report_.cols), opts, counters)
                         : bcsr_spmm(blocked_, b, opts, counters);
  if (opts.unpermute_output && !report_.rows.is_identity()) c = unpermute_rows(c, report_.rows);
  return c;
}

template <Scalar T>
DenseMatrix<T> spmm_pipeline(const CsrMatrix<T>& a, const DenseMatrix<T>& b, const PipelineConfig& config,
                             const SpmmOptions& opts) {
  return SpmmPlan<T>(a, config).execute(b, opts);
}

template <Scalar T>
double max_relative_error(const DenseMatrix<T>& x, const DenseMatrix<T>& ref, double eps) {
  if (x.n_rows() != ref.n_rows() || x.n_cols() != ref.n_cols())
    throw std::invalid_argument("max_relative_error: shapes differ");
  double worst = 0.0;
  auto xs = x.data();
  auto rs = ref.data();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = static_cast<double>(rs[i]);
    const double err = std::abs(static_cast<double>(xs[i]) - r) / (std::abs(r) + eps);
    if (std::isnan(err)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, err);
  }
  return worst;
}

#define BSMM_INSTANTIATE(T)                                                                                      \
  template void tile_mma(std::span<const T>, std::span<const T>, std::span<T>, TileShape);                       \
  template DenseMatrix<T> bcsr_spmm(const BcsrMatrix<T>&, const DenseMatrix<T>&, const SpmmOptions&,             \
                                    SpmmCounters*);                                                              \
  template DenseMatrix<T> bcsr_spmm_serial(const BcsrMatrix<T>&, const DenseMatrix<T>&, const SpmmOptions&,      \
                                           SpmmCounters*);                                                       \
  template class SpmmPlan<T>;                                                                                    \
  template DenseMatrix<T> spmm_pipeline(const CsrMatrix<T>&, const DenseMatrix<T>&, const PipelineConfig&,       \
                                        const SpmmOptions&);                                                     \
  template double max_relative_error(const DenseMatrix<T>&, const DenseMatrix<T>&, double);

BSMM_INSTANTIATE(float)
BSMM_INSTANTIATE(double)

#undef BSMM_INSTANTIATE

}  // namespace bsmm
