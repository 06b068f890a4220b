#pragma once

#include <span>

#include "bsmm/blocking.hpp"
#include "bsmm/csr.hpp"
#include "bsmm/reorder.hpp"

namespace bsmm {

/// Microkernel shape: C(m x n) += A(m x k) * B(k x n). m and k always equal
/// the operand's block dims; n is the column-panel width.
struct TileShape {
  index_t m = 16;
  index_t n = 8;
  index_t k = 8;
  bool operator==(const TileShape&) const = default;
};

inline TileShape tile_shape(const BlockDims& dims, index_t n) { return {dims.h, n, dims.w}; }

struct SpmmOptions {
  /// Output column-panel width (the microkernel's n).
  index_t tile_n = 8;
  /// 0 selects all available threads.
  int workers = 0;
  /// Iterate stored blocks only. When false every grid position is visited
  /// and missing blocks are multiplied as explicit zeros.
  bool skip_empty = true;
  /// Pipeline only: map result rows back to the caller's row order.
  bool unpermute_output = true;
};

struct SpmmCounters {
  index_t tile_mma_calls = 0;
  /// Stored blocks loaded, summed over column panels.
  index_t blocks_touched = 0;
  index_t tiles = 0;
  double wall_seconds = 0.0;
};

/// c (m x n) += a (m x k) * b (k x n), all row-major. For every output element
/// the products are added one at a time in ascending l.
template <Scalar T>
void tile_mma(std::span<const T> a, std::span<const T> b, std::span<T> c, TileShape shape);

int resolve_workers(int requested);

/// Blocked SpMM. Output tiles (block row x column panel) are distributed
/// statically over `opts.workers` threads in row-major tile order; each tile
/// accumulates its blocks in block-column order, so the result is bitwise
/// identical for any worker count.
template <Scalar T>
DenseMatrix<T> bcsr_spmm(const BcsrMatrix<T>& ab, const DenseMatrix<T>& b, const SpmmOptions& opts = {},
                         SpmmCounters* counters = nullptr);

/// Single-threaded reference of bcsr_spmm: every panel staged, generic
/// kernel only. Bitwise identical to bcsr_spmm.
template <Scalar T>
DenseMatrix<T> bcsr_spmm_serial(const BcsrMatrix<T>& ab, const DenseMatrix<T>& b, const SpmmOptions& opts = {},
                                SpmmCounters* counters = nullptr);

struct PipelineConfig {
  BlockDims dims;
  double tau = 0.9;
  ReorderMode mode = ReorderMode::rows;
  bool reorder = true;
  bool keep_best = true;
};

/// Preprocessed operand: reordering plus BCSR conversion, done once and
/// reused for any number of dense operands.
template <Scalar T>
class SpmmPlan {
 public:
  SpmmPlan(const CsrMatrix<T>& a, const PipelineConfig& config);

  const ReorderReport& report() const { return report_; }
  const BcsrMatrix<T>& blocked() const { return blocked_; }
  const PipelineConfig& config() const { return config_; }
  index_t nnz() const { return nnz_; }

  /// C = A * B. With opts.unpermute_output == false the rows come out in
  /// clustered order: row i is row report().rows[i] of A * B.
  DenseMatrix<T> execute(const DenseMatrix<T>& b, const SpmmOptions& opts = {},
                         SpmmCounters* counters = nullptr) const;

 private:
  PipelineConfig config_;
  ReorderReport report_;
  BcsrMatrix<T> blocked_;
  index_t n_cols_ = 0;
  index_t nnz_ = 0;
};

template <Scalar T>
DenseMatrix<T> spmm_pipeline(const CsrMatrix<T>& a, const DenseMatrix<T>& b, const PipelineConfig& config,
                             const SpmmOptions& opts = {});

/// Largest elementwise |x - ref| / (|ref| + eps).
template <Scalar T>
double max_relative_error(const DenseMatrix<T>& x, const DenseMatrix<T>& ref, double eps = 1e-30);

}  // namespace bsmm
